"""Depth-bounded construction of the subtyping poset and the recursive checker.

``build_subtyping`` materializes ``S_0, S_1, ..., S_k`` by iterating
``S_{i+1} = ppp(C, C_g, OP(S_i))`` with ``OP`` either ``wc`` or ``intervals``.
``SubtypeChecker`` decides subtyping between arbitrary ground terms by mutual
structural recursion between subtyping and argument containment.
``oracle_check`` compares the two on every ordered pair of ``S_k``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .hierarchy import ClassTable, admissibility_errors, parse_term, subclassing_poset
from .operators import WcPolicy, intervals, ppp, wc, wc_arguments
from .poset import BoundedPoset, Poset, Relation, iter_bits
from .terms import (
    NULL,
    OBJECT,
    Applied,
    ArgKind,
    Cofree,
    PlainClass,
    TypeArgument,
    canonical,
    canonical_arg,
    depth as term_depth,
)

DEFAULT_BUDGET = 100_000


class ArgMode(str, Enum):
    WILDCARDS = "wildcards"
    INTERVALS = "intervals"


@dataclass(frozen=True)
class Options:
    arg_mode: ArgMode = ArgMode.WILDCARDS
    wc_policy: WcPolicy = WcPolicy.PAPER
    cofree: bool = False

    def __post_init__(self):
        object.__setattr__(self, "arg_mode", ArgMode(self.arg_mode))
        object.__setattr__(self, "wc_policy", WcPolicy(self.wc_policy))

    @property
    def strict(self) -> bool:
        """Exact arguments never contain wildcards (strict wildcard policy only)."""
        return self.arg_mode is ArgMode.WILDCARDS and self.wc_policy is WcPolicy.PAPER


class NotAdmittable(ValueError):
    def __init__(self, term, reasons):
        self.term = term
        self.reasons = list(reasons)
        super().__init__(f"{term} is not admittable: " + "; ".join(self.reasons))


class BudgetExceeded(Exception):
    def __init__(self, sizes, attempted, budget, partial=None):
        self.sizes = list(sizes)
        self.attempted = attempted
        self.budget = budget
        self.partial = partial
        super().__init__(
            f"level {len(self.sizes)} would have {attempted} elements, budget is {budget} "
            f"(sizes so far: {self.sizes})"
        )


# -- materialized construction ------------------------------------------------


@dataclass
class SubtypingPoset:
    poset: BoundedPoset
    depth: int
    options: Options
    level_sizes: list[int] = field(default_factory=list)
    level_covers: list[int] = field(default_factory=list)

    def __post_init__(self):
        self._ids = {self.poset.label(e): e for e in self.poset.elements}

    def __len__(self):
        return len(self.poset)

    @property
    def terms(self) -> list:
        return [self.poset.label(e) for e in self.poset.elements]

    def __contains__(self, term):
        return term in self._ids

    def element(self, term):
        return self._ids[term]

    def leq(self, a, b) -> bool:
        """Order between two terms of this poset."""
        return self.poset.leq(self._ids[a], self._ids[b])

    def to_dot(self) -> str:
        return self.poset.to_dot("subtyping")

    def to_json(self) -> dict:
        p = self.poset
        return {
            "depth": self.depth,
            "arg_mode": self.options.arg_mode.value,
            "wc_policy": self.options.wc_policy.value,
            "levels": [
                {"depth": i, "elements": n, "covers": c}
                for i, (n, c) in enumerate(zip(self.level_sizes, self.level_covers))
            ],
            "elements": [
                {"id": e, "term": str(p.label(e)), "depth": term_depth(p.label(e))}
                for e in p.elements
            ],
            "covers": sorted([a, b] for a, b in p.covers),
        }


def load_poset_json(data: dict):
    """Read an exported subtyping poset back as ``(relation, labels, options)``.

    The order is the reflexive-transitive closure of the listed covers, kept as
    a raw ``Relation`` so a damaged file can still be audited.
    """
    options = Options(data.get("arg_mode", "wildcards"), data.get("wc_policy", "paper"))
    labels = {}
    for item in data["elements"]:
        labels[item["id"]] = canonical(parse_term(item["term"]), options.strict)
    rel = Relation(labels, [tuple(c) for c in data["covers"]], closure=True)
    return rel, labels, options


def _argument_count(S: BoundedPoset, options: Options) -> int:
    if options.arg_mode is ArgMode.INTERVALS:
        return S.count_comparable()
    return len(wc_arguments(S, options.wc_policy))


def _pair_label(g, a):
    return Applied(g.name, a)


def build_subtyping(table: ClassTable, depth: int, options: Options | None = None,
                    budget: int = DEFAULT_BUDGET) -> SubtypingPoset:
    """Materialize ``S_depth``; element ids are ints, labels are ``TypeTerm``s."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    options = options or Options()
    C, Cg = subclassing_poset(table)
    plain = [c for c in C.elements if c not in Cg]
    S = BoundedPoset.of(C.restrict(plain).relabel({c: i for i, c in enumerate(plain)}))
    sizes, covers = [len(S)], [S.count_covers()]
    for i in range(depth):
        attempted = len(plain) + len(Cg) * _argument_count(S, options)
        if attempted > budget:
            partial = SubtypingPoset(S, i, options, sizes, covers)
            raise BudgetExceeded(sizes, attempted, budget, partial)
        if options.arg_mode is ArgMode.INTERVALS:
            A = intervals(S)
        else:
            A = wc(S, options.wc_policy)
        P = ppp(C, Cg, A, pair_label=_pair_label)
        S = BoundedPoset.of(P.relabel({e: k for k, e in enumerate(P.elements)}))
        sizes.append(len(S))
        covers.append(S.count_covers())
    return SubtypingPoset(S, depth, options, sizes, covers)


def subtyping_chain(table: ClassTable, depth: int, options: Options | None = None,
                    budget: int = DEFAULT_BUDGET) -> list[SubtypingPoset]:
    return [build_subtyping(table, k, options, budget) for k in range(depth + 1)]


# -- recursive checker --------------------------------------------------------


@dataclass
class TraceStep:
    depth: int
    judgement: str
    rule: str = ""
    result: bool | None = None

    def __str__(self):
        verdict = {True: "true", False: "false", None: "?"}[self.result]
        return f"{'  ' * self.depth}{self.judgement}  [{self.rule}] {verdict}"


class SubtypeChecker:
    """Decides ``a <: b`` and ``p ⊑ q`` over one class table.

    Subtyping of parameterized types defers to containment of their arguments,
    and containment defers to subtyping of the interval endpoints; the total
    nesting depth drops at every step, so the recursion terminates.
    """

    def __init__(self, table: ClassTable, options: Options | None = None):
        self.table = table
        self.options = options or Options()
        self.strict = self.options.strict
        self._memo: dict = {}
        self._admitted: set = set()

    def normalize(self, t):
        if t not in self._admitted:
            errs = admissibility_errors(self.table, t, allow_cofree=self.options.cofree)
            if errs:
                raise NotAdmittable(t, errs)
        t = canonical(t, self.strict)
        self._admitted.add(t)
        return t

    def normalize_arg(self, a: TypeArgument) -> TypeArgument:
        lo, hi = self.normalize(a.lower), self.normalize(a.upper)
        return canonical_arg(TypeArgument(lo, hi, a.kind), self.strict)

    def is_subtype(self, a, b, trace: list | None = None) -> bool:
        a, b = self.normalize(a), self.normalize(b)
        if trace is None:
            return self._decide(a, b, None, 0)[1]
        return self._sub(a, b, trace, 0)

    def contains(self, outer: TypeArgument, inner: TypeArgument, trace: list | None = None) -> bool:
        """``inner ⊑ outer``."""
        outer, inner = self.normalize_arg(outer), self.normalize_arg(inner)
        return self._contains(outer, inner, trace, 0)

    def check_normalized(self, a, b) -> bool:
        """``a <: b`` for terms already known to be admittable and canonical."""
        return self._decide(a, b, None, 0)[1]

    def _sub(self, a, b, trace, d) -> bool:
        if trace is None:
            key = (a, b)
            r = self._memo.get(key)
            if r is None:
                r = self._memo[key] = self._decide(a, b, None, d)[1]
            return r
        step = TraceStep(d, f"{a} <: {b}")
        trace.append(step)
        step.rule, step.result = self._decide(a, b, trace, d)
        return step.result

    def _decide(self, a, b, trace, d) -> tuple[str, bool]:
        sub = self.table.subclass
        if a == b:
            return "reflexivity", True
        if a == NULL:
            return "null-bottom", True
        if b == OBJECT:
            return "object-top", True
        if isinstance(b, Cofree):
            if isinstance(a, Cofree):
                return "cofree-subclass", sub(a.name, b.name)
            return "cofree-has-only-cofree-subtypes", False
        if isinstance(a, PlainClass):
            if isinstance(b, PlainClass):
                return "subclass", sub(a.name, b.name)
            return "plain-below-parameterized", False
        if isinstance(a, Cofree):
            if isinstance(b, PlainClass):
                return "cofree-erasure", sub(a.name, b.name)
            return "cofree-below-instantiations", sub(a.name, b.name)
        if isinstance(b, PlainClass):
            return "erasure", sub(a.name, b.name)
        if not sub(a.name, b.name):
            return "generic-subclass", False
        return "generic-subclass+containment", self._contains(b.arg, a.arg, trace, d + 1)

    def _contains(self, q: TypeArgument, p: TypeArgument, trace, d) -> bool:
        if trace is not None:
            step = TraceStep(d, f"{p} ⊑ {q}")
            trace.append(step)
        if self.strict and q.kind is ArgKind.EXACT and p.kind is not ArgKind.EXACT:
            rule, r = "exact-contains-no-wildcard", False
        else:
            rule = "interval-containment"
            r = self._sub(q.lower, p.lower, trace, d + 1) and self._sub(p.upper, q.upper, trace, d + 1)
        if trace is not None:
            step.rule, step.result = rule, r
        return r


def subtype_query(table: ClassTable, a, b, options: Options | None = None,
                  trace: list | None = None) -> bool:
    return SubtypeChecker(table, options).is_subtype(a, b, trace)


# -- differential check ---------------------------------------------------------


@dataclass
class OracleReport:
    pairs_checked: int
    disagreements: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        return {
            "pairs_checked": self.pairs_checked,
            "disagreements": [
                {"left": str(a), "right": str(b), "materialized": m, "recursive": r}
                for a, b, m, r in self.disagreements
            ],
        }


def compare_order(order, labels, checker: SubtypeChecker, limit: int | None = None) -> OracleReport:
    """Compare ``order.leq`` on element ids with the checker on their labels."""
    els = list(order.elements)
    terms = [checker.normalize(labels[e]) for e in els]
    report = OracleReport(0)
    if isinstance(order, Poset):
        ups = [order.up_mask(order.index(e)) for e in els]
        for i, a in enumerate(terms):
            up = ups[i]
            for j, b in enumerate(terms):
                m = bool(up >> j & 1)
                r = checker.check_normalized(a, b)
                if m != r:
                    report.disagreements.append((a, b, m, r))
            report.pairs_checked += len(terms)
    else:
        for i, x in enumerate(els):
            for j, y in enumerate(els):
                m = order.leq(x, y)
                r = checker.check_normalized(terms[i], terms[j])
                if m != r:
                    report.disagreements.append((terms[i], terms[j], m, r))
            report.pairs_checked += len(els)
    if limit is not None:
        del report.disagreements[limit:]
    return report


def oracle_check(table: ClassTable, depth: int, options: Options | None = None,
                 budget: int = DEFAULT_BUDGET, S: SubtypingPoset | None = None) -> OracleReport:
    """Every ordered pair of ``S_depth``: materialized order vs recursive checker."""
    options = options or Options()
    if S is None:
        S = build_subtyping(table, depth, options, budget)
    checker = SubtypeChecker(table, options)
    return compare_order(S.poset, S.poset.labels, checker)


def embeds(small: SubtypingPoset, big: SubtypingPoset) -> bool:
    """Every term of ``small`` is in ``big`` with the same mutual order."""
    terms = small.terms
    if any(t not in big for t in terms):
        return False
    ids = [big.element(t) for t in terms]
    bp = big.poset
    sp = small.poset
    for i, a in enumerate(sp.elements):
        up = sp.up_mask(sp.index(a))
        bi = bp.index(ids[i])
        bup = bp.up_mask(bi)
        for j, bj in enumerate(ids):
            if bool(up >> j & 1) != bool(bup >> bp.index(bj) & 1):
                return False
    return True


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
