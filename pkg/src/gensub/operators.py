"""The three poset operators: partial poset product, wildcards, intervals."""

from __future__ import annotations

from enum import Enum
from typing import Callable, Iterable

from .poset import BoundedPoset, Poset, PosetError, check_masks, iter_bits
from .terms import ArgKind, TypeArgument, canonical_kind


class WcPolicy(str, Enum):
    """Which wildcard arguments are identified by ``wc``.

    PAPER merges ``? extends Top`` with ``? super Bottom`` (the unbounded ``?``)
    and ``? extends Bottom`` with the exact ``Bottom``, giving ``3n - 2``
    elements. SEMANTIC quotients by mutual containment, which also merges
    ``? super Top`` into the exact ``Top`` and gives ``3n - 3``.
    """

    PAPER = "paper"
    SEMANTIC = "semantic"


class ConstructionError(PosetError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


def ppp(C: Poset, generic: Iterable, A: Poset, pair_label: Callable | None = None) -> Poset:
    """Partial poset product of ``C`` and ``A`` relative to ``generic``.

    Unpaired elements of ``C`` keep their ids; a pair ``(g, a)`` gets the id
    ``(g, a)``. Pairs are ordered componentwise, and pairs compare with plain
    elements through their first component.
    """
    gset = set(generic)
    for g in gset:
        if g not in C:
            raise ConstructionError(f"generic element {g!r} is not in the first poset")
    generic = [g for g in C.elements if g in gset]
    plain = [c for c in C.elements if c not in gset]
    nA = len(A)
    base = len(plain)
    offset = {g: base + k * nA for k, g in enumerate(generic)}
    cidx = [C.index(c) for c in plain]
    gidx = [C.index(g) for g in generic]
    # bits of plain elements / generic blocks reachable from each C element
    plain_up = {}
    for i in range(len(C)):
        up = C.up_mask(i)
        mask = 0
        for k, ci in enumerate(cidx):
            if up >> ci & 1:
                mask |= 1 << k
        plain_up[i] = mask
    full_block = (1 << nA) - 1

    elements = list(plain)
    labels = {c: C.labels.get(c, c) for c in plain}
    up_masks = []
    for c, ci in zip(plain, cidx):
        mask = plain_up[ci]
        up = C.up_mask(ci)
        for g, gi in zip(generic, gidx):
            if up >> gi & 1:
                mask |= full_block << offset[g]
        up_masks.append(mask)
    a_up = [A.up_mask(j) for j in range(nA)]
    for g, gi in zip(generic, gidx):
        up = C.up_mask(gi)
        above = [offset[h] for h, hi in zip(generic, gidx) if up >> hi & 1]
        pm = plain_up[gi]
        glabel = C.labels.get(g, g)
        for j, a in enumerate(A.elements):
            mask = pm
            for off in above:
                mask |= a_up[j] << off
            up_masks.append(mask)
            pid = (g, a)
            elements.append(pid)
            alabel = A.labels.get(a, a)
            labels[pid] = pair_label(glabel, alabel) if pair_label else (glabel, alabel)
    report = check_masks(elements, up_masks, limit=1)
    if not report.ok:
        raise ConstructionError(f"ppp result is not a poset: {report.summary()}", report)
    return Poset.from_up_masks(elements, up_masks, labels)


def argument_poset(S: Poset, args: list[tuple[int, int, ArgKind]], strict: bool,
                   ids: list | None = None) -> Poset:
    """Order interval arguments over ``S`` by containment.

    ``args`` holds ``(lower index, upper index, kind)``; ``[s,t]`` is contained
    in ``[u,v]`` iff ``u <= s`` and ``t <= v``. With ``strict`` no non-exact
    argument is contained in an exact one.
    """
    n = len(S)
    # low_in[x]: args whose lower bound is <= x; up_over[y]: args whose upper is >= y
    low_in = [0] * n
    up_over = [0] * n
    for k, (lo, hi, _) in enumerate(args):
        bit = 1 << k
        for x in iter_bits(S.up_mask(lo)):
            low_in[x] |= bit
        for y in iter_bits(S.down_mask(hi)):
            up_over[y] |= bit
    exact_mask = 0
    for k, (_, _, kind) in enumerate(args):
        if kind is ArgKind.EXACT:
            exact_mask |= 1 << k
    up_masks = []
    for lo, hi, kind in args:
        mask = low_in[lo] & up_over[hi]
        if strict and kind is not ArgKind.EXACT:
            mask &= ~exact_mask
        up_masks.append(mask)
    els = S.elements
    if ids is None:
        ids = [(els[lo], els[hi], kind) for lo, hi, kind in args]
    labels = {}
    for i, (lo, hi, kind) in zip(ids, args):
        labels[i] = TypeArgument(S.label(els[lo]), S.label(els[hi]), kind)
    return Poset.from_up_masks(ids, up_masks, labels)


def wc_arguments(S: BoundedPoset, policy: WcPolicy = WcPolicy.PAPER) -> list[tuple[int, int, ArgKind]]:
    """The identified wildcard arguments of ``S`` as index triples."""
    policy = WcPolicy(policy)
    top, bot = S.index(S.top), S.index(S.bottom)
    strict = policy is WcPolicy.PAPER
    seen = {}
    for t in range(len(S)):
        for lo, hi, kind in ((t, t, ArgKind.EXACT), (bot, t, ArgKind.UPPER), (t, top, ArgKind.LOWER)):
            kind = canonical_kind(lo, hi, kind, strict, bottom=bot, top=top)
            if kind is ArgKind.ANY:
                lo, hi = bot, top
            seen.setdefault((lo, hi, kind), None)
    return list(seen)


def wc(S: Poset, policy: WcPolicy = WcPolicy.PAPER) -> Poset:
    """Wildcard arguments of a bounded poset ordered by containment."""
    if not isinstance(S, BoundedPoset):
        try:
            S = BoundedPoset.of(S)
        except PosetError:
            raise PosetError("wc needs a bounded poset (top and bottom)") from None
    policy = WcPolicy(policy)
    args = wc_arguments(S, policy)
    return argument_poset(S, args, strict=policy is WcPolicy.PAPER)


def interval_arguments(S: Poset, bottom=None, top=None) -> list[tuple[int, int, ArgKind]]:
    bot = S.index(bottom) if bottom is not None else None
    tp = S.index(top) if top is not None else None
    out = []
    for i in range(len(S)):
        for j in iter_bits(S.up_mask(i)):
            out.append((i, j, canonical_kind(i, j, ArgKind.INTERVAL, False, bottom=bot, top=tp)))
    return out


def intervals(S: Poset) -> Poset:
    """One argument ``[s,t]`` per comparable pair ``s <= t``, ordered by containment."""
    bottom = top = None
    if isinstance(S, BoundedPoset):
        bottom, top = S.bottom, S.top
    return argument_poset(S, interval_arguments(S, bottom, top), strict=False)


int_ = intervals
