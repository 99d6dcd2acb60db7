"""Audits over the constructed relation.

* the erasure / free-type adjunction ``E(t) <= c  iff  t <: FT(c)``;
* F-subtypes (``Ty <: F<Ty>``) and F-supertypes (``F<Ty> <: Ty``);
* order-isomorphism of the free-type and cofree-type restrictions with
  subclassing;
* admittable vs valid types under (doubly, F-) bounded type parameters.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace

from .construction import (
    DEFAULT_BUDGET,
    Options,
    SubtypeChecker,
    SubtypingPoset,
    build_subtyping,
)
from .hierarchy import ClassTable, admissibility_errors, subclassing_poset
from .poset import Poset, find_isomorphism
from .terms import ANY, Applied, Cofree, PlainClass, canonical, erase, exact, substitute


def free_type(table: ClassTable, c: str):
    """``C<?>`` for a generic class, the class itself otherwise."""
    if c not in table:
        raise KeyError(f"unknown class {c}")
    return Applied(c, ANY) if table.is_generic(c) else PlainClass(c)


def cofree_type(table: ClassTable, c: str):
    return Cofree(c) if table.is_generic(c) else PlainClass(c)


# -- adjunction ---------------------------------------------------------------


@dataclass
class AdjunctionViolation:
    type: str
    cls: str
    direction: str  # "erasure=>free" or "free=>erasure"


@dataclass
class AdjunctionReport:
    pairs_checked: int
    violations: list[AdjunctionViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"pairs_checked": self.pairs_checked, "ok": self.ok,
                "violations": [asdict(v) for v in self.violations]}

    @classmethod
    def from_dict(cls, data: dict) -> "AdjunctionReport":
        return cls(data["pairs_checked"], [AdjunctionViolation(**v) for v in data["violations"]])


def check_adjunction(table: ClassTable, depth: int, options: Options | None = None,
                     budget: int = DEFAULT_BUDGET, S: SubtypingPoset | None = None) -> AdjunctionReport:
    """Check both directions of the adjunction for every ``t`` in ``S_depth`` and every class."""
    options = options or Options()
    if S is None:
        S = build_subtyping(table, depth, options, budget)
    C, _ = subclassing_poset(table)
    checker = SubtypeChecker(table, options)
    frees = {c: checker.normalize(free_type(table, c)) for c in table.class_names}
    report = AdjunctionReport(0)
    for t in S.terms:
        e = erase(t)
        for c in table.class_names:
            left = C.leq(e, c)
            right = checker.check_normalized(t, frees[c])
            report.pairs_checked += 1
            if left and not right:
                report.violations.append(AdjunctionViolation(str(t), c, "erasure=>free"))
            elif right and not left:
                report.violations.append(AdjunctionViolation(str(t), c, "free=>erasure"))
    return report


# -- F-subtypes / F-supertypes ------------------------------------------------------


@dataclass
class Enumeration:
    generic: str
    depth: int
    f_subtypes: list[str]
    f_supertypes: list[str]
    maximal_f_subtypes: list[str]
    minimal_f_subtypes: list[str]
    maximal_f_supertypes: list[str]
    minimal_f_supertypes: list[str]
    fixed_points: list[str]
    free_type: str
    free_type_is_f_subtype: bool

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Enumeration":
        return cls(**data)


def _require_generic(table, F):
    if not table.is_generic(F):
        raise ValueError(f"{F} is not a generic class")


def f_subtypes(table: ClassTable, F: str, depth: int, options: Options | None = None,
               budget: int = DEFAULT_BUDGET, S: SubtypingPoset | None = None) -> list:
    """Terms ``Ty`` of ``S_depth`` with ``Ty <: F<Ty>``."""
    _require_generic(table, F)
    S = S or build_subtyping(table, depth, options, budget)
    checker = SubtypeChecker(table, S.options)
    return [t for t in S.terms if checker.is_subtype(t, Applied(F, exact(t)))]


def f_supertypes(table: ClassTable, F: str, depth: int, options: Options | None = None,
                 budget: int = DEFAULT_BUDGET, S: SubtypingPoset | None = None) -> list:
    """Terms ``Ty`` of ``S_depth`` with ``F<Ty> <: Ty``."""
    _require_generic(table, F)
    S = S or build_subtyping(table, depth, options, budget)
    checker = SubtypeChecker(table, S.options)
    return [t for t in S.terms if checker.is_subtype(Applied(F, exact(t)), t)]


def enumerate_f(table: ClassTable, F: str, depth: int, options: Options | None = None,
                budget: int = DEFAULT_BUDGET, S: SubtypingPoset | None = None) -> Enumeration:
    _require_generic(table, F)
    S = S or build_subtyping(table, depth, options, budget)
    subs = f_subtypes(table, F, depth, S=S)
    sups = f_supertypes(table, F, depth, S=S)
    p = S.poset
    sub_ids = [S.element(t) for t in subs]
    sup_ids = [S.element(t) for t in sups]

    def names(ids):
        return [str(p.label(e)) for e in ids]

    checker = SubtypeChecker(table, S.options)
    ft = free_type(table, F)
    sup_set = set(sups)
    return Enumeration(
        generic=F,
        depth=S.depth,
        f_subtypes=[str(t) for t in subs],
        f_supertypes=[str(t) for t in sups],
        maximal_f_subtypes=names(p.maximal(sub_ids)),
        minimal_f_subtypes=names(p.minimal(sub_ids)),
        maximal_f_supertypes=names(p.maximal(sup_ids)),
        minimal_f_supertypes=names(p.minimal(sup_ids)),
        fixed_points=[str(t) for t in subs if t in sup_set],
        free_type=str(ft),
        free_type_is_f_subtype=checker.is_subtype(ft, Applied(F, exact(ft))),
    )


# -- restriction isomorphisms ---------------------------------------------------


@dataclass
class IsomorphismReport:
    free_isomorphic: bool
    free_natural_map: bool
    cofree_isomorphic: bool | None = None
    cofree_natural_map: bool | None = None

    @property
    def ok(self) -> bool:
        return self.free_isomorphic and self.cofree_isomorphic is not False

    def to_dict(self) -> dict:
        return {**asdict(self), "ok": self.ok}

    @classmethod
    def from_dict(cls, data: dict) -> "IsomorphismReport":
        data = {k: v for k, v in data.items() if k != "ok"}
        return cls(**data)


def free_restriction(table: ClassTable, S: SubtypingPoset) -> Poset:
    """``S`` restricted to the free types, with element ids renamed to class names."""
    ids = {S.element(free_type(table, c)): c for c in table.class_names}
    return S.poset.restrict(ids).relabel(ids)


def cofree_restriction(table: ClassTable, options: Options | None = None) -> Poset:
    """Cofree types of generic classes plus the non-generic classes, ids are class names."""
    options = replace(options or Options(), cofree=True)
    checker = SubtypeChecker(table, options)
    terms = {c: cofree_type(table, c) for c in table.class_names}
    return Poset.from_leq(table.class_names, lambda a, b: checker.is_subtype(terms[a], terms[b]),
                          labels=terms)


def _natural(mapping, p: Poset) -> bool:
    return mapping is not None and all(mapping[c] == c for c in p.elements)


def restriction_isomorphism_checks(table: ClassTable, depth: int = 1, options: Options | None = None,
                                   budget: int = DEFAULT_BUDGET,
                                   S: SubtypingPoset | None = None) -> IsomorphismReport:
    if depth < 1:
        raise ValueError("free types need depth >= 1")
    options = options or Options()
    S = S or build_subtyping(table, depth, options, budget)
    C, _ = subclassing_poset(table)
    free = free_restriction(table, S)
    iso = find_isomorphism(free, C)
    report = IsomorphismReport(iso is not None, _natural(iso, free))
    if options.cofree:
        cof = cofree_restriction(table, options)
        iso = find_isomorphism(cof, C)
        report.cofree_isomorphic = iso is not None
        report.cofree_natural_map = _natural(iso, cof)
    return report


# -- validity -------------------------------------------------------------------


@dataclass
class Reason:
    kind: str  # "admittability", "lower", "upper"
    term: str
    detail: str

    def __str__(self):
        return f"{self.term}: {self.detail}"


@dataclass
class ValidityVerdict:
    term: str
    admittable: bool
    valid: bool
    reasons: list[Reason] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ValidityVerdict":
        return cls(data["term"], data["admittable"], data["valid"],
                   [Reason(**r) for r in data["reasons"]])


def validity(table: ClassTable, term, options: Options | None = None) -> ValidityVerdict:
    """Admittability and validity of a ground term.

    An argument ``[S,T]`` of ``C`` with declared bounds ``[L,U]`` is valid iff
    ``L[X:=S] <: S`` and ``T <: U[X:=T]``; a parameterized type is valid iff its
    argument is and both endpoints are valid types themselves. Types written
    inside declared bounds are only required to be admittable.
    """
    options = options or Options()
    errs = admissibility_errors(table, term, allow_cofree=options.cofree)
    if errs:
        return ValidityVerdict(str(term), False, False,
                               [Reason("admittability", str(term), e) for e in errs])
    checker = SubtypeChecker(table, options)
    t = checker.normalize(term)
    reasons: list[Reason] = []
    seen = set()

    def walk(x):
        if not isinstance(x, Applied) or x in seen:
            return
        seen.add(x)
        decl = table.decl(x.name)
        s, u = x.arg.lower, x.arg.upper
        low = canonical(substitute(decl.lower_bound, decl.param, s), checker.strict)
        if not checker.is_subtype(low, s):
            reasons.append(Reason("lower", str(x),
                                  f"{s} is not a supertype of lower bound {low} ({decl.param} := {s})"))
        high = canonical(substitute(decl.upper_bound, decl.param, u), checker.strict)
        if not checker.is_subtype(u, high):
            reasons.append(Reason("upper", str(x),
                                  f"{u} is not a subtype of upper bound {high} ({decl.param} := {u})"))
        walk(s)
        walk(u)

    walk(t)
    return ValidityVerdict(str(t), True, not reasons, reasons)
