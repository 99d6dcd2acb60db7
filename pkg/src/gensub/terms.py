"""Ground type terms and type arguments.

A type argument is stored as an interval ``[lower, upper]`` plus a kind tag.
The tag only matters for printing, except under the strict (PAPER) wildcard
policy where an exact argument never contains a wildcard (``? super Object``
stays strictly above ``Object``).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union


class ArgKind(str, Enum):
    EXACT = "exact"
    UPPER = "upper"  # ? extends T
    LOWER = "lower"  # ? super T
    ANY = "any"  # ?
    INTERVAL = "interval"


@dataclass(frozen=True)
class PlainClass:
    name: str

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("plain", self.name)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Cofree:
    name: str

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("cofree", self.name)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return f"{self.name}<!>"


@dataclass(frozen=True)
class TypeVar:
    """The class parameter; only ever appears inside declared bounds."""

    name: str

    def __hash__(self):
        return hash(("var", self.name))

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class TypeArgument:
    lower: "TypeTerm"
    upper: "TypeTerm"
    kind: ArgKind = ArgKind.INTERVAL

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.lower, self.upper, self.kind)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        k = self.kind
        if k is ArgKind.ANY:
            return "?"
        if k is ArgKind.EXACT:
            return str(self.lower)
        if k is ArgKind.UPPER:
            return f"? extends {self.upper}"
        if k is ArgKind.LOWER:
            return f"? super {self.lower}"
        return f"[{self.lower}, {self.upper}]"


@dataclass(frozen=True)
class Applied:
    name: str
    arg: TypeArgument

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("app", self.name, self.arg)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return f"{self.name}<{self.arg}>"


TypeTerm = Union[PlainClass, Applied, Cofree]

OBJECT = PlainClass("Object")
NULL = PlainClass("Null")


def exact(t) -> TypeArgument:
    return TypeArgument(t, t, ArgKind.EXACT)


def extends(t) -> TypeArgument:
    return TypeArgument(NULL, t, ArgKind.UPPER)


def super_(t) -> TypeArgument:
    return TypeArgument(t, OBJECT, ArgKind.LOWER)


def interval(s, t) -> TypeArgument:
    return TypeArgument(s, t, ArgKind.INTERVAL)


ANY = TypeArgument(NULL, OBJECT, ArgKind.ANY)


def canonical_kind(lower, upper, kind: ArgKind, strict: bool, bottom=NULL, top=OBJECT) -> ArgKind:
    """Kind tag of ``[lower, upper]`` after identification.

    Non-strict: the tag is a pure function of the interval. Strict (PAPER
    policy): ``? extends Null`` is the exact ``Null`` and ``? super Null`` is
    ``?``, but every other wildcard keeps its wildcard-ness.
    """
    if lower == bottom and upper == top and lower != upper:
        return ArgKind.ANY
    if lower == upper and (not strict or kind in (ArgKind.EXACT, ArgKind.INTERVAL) or lower == bottom):
        return ArgKind.EXACT
    if lower == bottom:
        return ArgKind.UPPER
    if upper == top:
        return ArgKind.LOWER
    return ArgKind.INTERVAL


def canonical_arg(arg: TypeArgument, strict: bool) -> TypeArgument:
    lo = canonical(arg.lower, strict)
    hi = canonical(arg.upper, strict)
    kind = canonical_kind(lo, hi, arg.kind, strict)
    if kind is ArgKind.ANY:
        return ANY
    return TypeArgument(lo, hi, kind)


def canonical(t, strict: bool):
    if isinstance(t, Applied):
        arg = canonical_arg(t.arg, strict)
        return t if arg == t.arg else Applied(t.name, arg)
    return t


def depth(t) -> int:
    """Nesting depth: 0 for plain and cofree types."""
    if isinstance(t, Applied):
        return 1 + max(depth(t.arg.lower), depth(t.arg.upper))
    return 0


def erase(t) -> str:
    if isinstance(t, (PlainClass, Applied, Cofree)):
        return t.name
    raise TypeError(f"cannot erase {t!r}")


def substitute(expr, var: str, value):
    """Replace the type variable ``var`` by the ground term ``value``."""
    if isinstance(expr, TypeVar):
        return value if expr.name == var else expr
    if isinstance(expr, Applied):
        a = expr.arg
        return Applied(expr.name, TypeArgument(substitute(a.lower, var, value),
                                               substitute(a.upper, var, value), a.kind))
    return expr


def mentions(expr, var: str) -> bool:
    if isinstance(expr, TypeVar):
        return expr.name == var
    if isinstance(expr, Applied):
        return mentions(expr.arg.lower, var) or mentions(expr.arg.upper, var)
    return False


def class_names(expr) -> set[str]:
    if isinstance(expr, Applied):
        return {expr.name} | class_names(expr.arg.lower) | class_names(expr.arg.upper)
    if isinstance(expr, (PlainClass, Cofree)):
        return {expr.name}
    return set()
