"""Finite partial orders stored as Hasse diagrams with a cached closure.

Elements are opaque hashable ids. Internally every element gets an index and
the reflexive-transitive order is kept as one up-set bitmask per element, so
``leq`` is a single bit test and most set operations are integer arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping


class PosetError(Exception):
    pass


class ElementNotFound(PosetError, KeyError):
    def __init__(self, element):
        super().__init__(element)
        self.element = element

    def __str__(self):
        return f"element not found: {self.element!r}"


class PosetLawError(PosetError):
    """Raised when a computed relation fails a partial-order law."""

    def __init__(self, report: "LawReport"):
        super().__init__(report.summary())
        self.report = report


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """An immutable finite poset.

    ``covers`` may be any acyclic edge set ``(lower, upper)``; it is reduced to
    its transitive reduction on construction. A cycle raises ``PosetError``.
    """

    def __init__(
        self,
        elements: Iterable[Hashable],
        covers: Iterable[tuple[Hashable, Hashable]] = (),
        labels: Mapping[Hashable, Any] | None = None,
    ):
        elements = tuple(elements)
        index = {e: i for i, e in enumerate(elements)}
        if len(index) != len(elements):
            raise PosetError("duplicate element ids")
        uppers: dict[int, set[int]] = {i: set() for i in range(len(elements))}
        for lo, hi in covers:
            if lo not in index:
                raise ElementNotFound(lo)
            if hi not in index:
                raise ElementNotFound(hi)
            if lo == hi:
                continue
            # an element's up-set is assembled from its uppers' up-sets
            uppers[index[lo]].add(index[hi])
        try:
            order = list(TopologicalSorter(uppers).static_order())
        except CycleError as exc:
            cycle = [elements[i] for i in exc.args[1]]
            raise PosetError(f"cover graph has a cycle: {cycle}") from None
        up = [0] * len(elements)
        for i in order:
            mask = 1 << i
            for j in uppers[i]:
                mask |= up[j]
            up[i] = mask
        self._init(elements, index, up, labels)

    def _init(self, elements, index, up, labels):
        self._elements = elements
        self._index = index
        self._up = up
        self._down: list[int] | None = None
        self._cover_masks: list[int] | None = None
        self._labels = dict(labels) if labels else {}

    @classmethod
    def from_up_masks(cls, elements, up_masks, labels=None) -> "Poset":
        """Build from per-element up-set bitmasks that already form a partial order.

        Used by the operators, which compute the full relation directly. No law
        checking happens here; callers run ``check_masks`` first.
        """
        elements = tuple(elements)
        p = cls.__new__(cls)
        p._init(elements, {e: i for i, e in enumerate(elements)}, list(up_masks), labels)
        return p

    @classmethod
    def from_leq(cls, elements, leq: Callable[[Any, Any], bool], labels=None) -> "Poset":
        """Build from an order predicate, checking the laws first."""
        elements = tuple(elements)
        up = []
        for a in elements:
            mask = 0
            for j, b in enumerate(elements):
                if leq(a, b):
                    mask |= 1 << j
            up.append(mask)
        report = check_masks(elements, up)
        if not report.ok:
            raise PosetLawError(report)
        return cls.from_up_masks(elements, up, labels)

    # -- basic protocol ---------------------------------------------------

    @property
    def elements(self) -> tuple:
        return self._elements

    @property
    def labels(self) -> dict:
        return self._labels

    def label(self, e) -> Any:
        self.index(e)
        return self._labels.get(e, e)

    def __len__(self):
        return len(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def __contains__(self, e):
        return e in self._index

    def __repr__(self):
        return f"<{type(self).__name__} with {len(self)} elements, {len(self.covers)} covers>"

    def index(self, e) -> int:
        try:
            return self._index[e]
        except (KeyError, TypeError):
            raise ElementNotFound(e) from None

    # -- order queries ----------------------------------------------------

    def leq(self, a, b) -> bool:
        return bool(self._up[self.index(a)] >> self.index(b) & 1)

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def up_mask(self, i: int) -> int:
        return self._up[i]

    def down_mask(self, i: int) -> int:
        if self._down is None:
            down = [0] * len(self._elements)
            for k, mask in enumerate(self._up):
                bit = 1 << k
                for j in iter_bits(mask):
                    down[j] |= bit
            self._down = down
        return self._down[i]

    def up_set(self, a) -> set:
        return {self._elements[j] for j in iter_bits(self._up[self.index(a)])}

    def down_set(self, a) -> set:
        return {self._elements[j] for j in iter_bits(self.down_mask(self.index(a)))}

    def maximal(self, subset: Iterable | None = None) -> list:
        idx = self._subset_mask(subset)
        out = []
        for i in iter_bits(idx):
            if not (self._up[i] & idx) & ~(1 << i):
                out.append(self._elements[i])
        return out

    def minimal(self, subset: Iterable | None = None) -> list:
        idx = self._subset_mask(subset)
        out = []
        for i in iter_bits(idx):
            if not (self.down_mask(i) & idx) & ~(1 << i):
                out.append(self._elements[i])
        return out

    def _subset_mask(self, subset) -> int:
        if subset is None:
            return (1 << len(self._elements)) - 1
        mask = 0
        for e in subset:
            mask |= 1 << self.index(e)
        return mask

    # -- Hasse diagram ----------------------------------------------------

    def _covers_of(self) -> list[int]:
        if self._cover_masks is None:
            up = self._up
            masks = []
            for i, mask in enumerate(up):
                strict = mask & ~(1 << i)
                cov = strict
                for j in iter_bits(strict):
                    if cov >> j & 1:
                        cov &= ~(up[j] & ~(1 << j))
                masks.append(cov)
            self._cover_masks = masks
        return self._cover_masks

    @property
    def covers(self) -> frozenset:
        els = self._elements
        return frozenset(
            (els[i], els[j]) for i, m in enumerate(self._covers_of()) for j in iter_bits(m)
        )

    def upper_covers(self, a) -> list:
        return [self._elements[j] for j in iter_bits(self._covers_of()[self.index(a)])]

    def count_covers(self) -> int:
        return sum(m.bit_count() for m in self._covers_of())

    def count_comparable(self) -> int:
        return sum(m.bit_count() for m in self._up)

    # -- derived posets ---------------------------------------------------

    def restrict(self, subset: Iterable) -> "Poset":
        """Induced subposet on ``subset`` (order inherited, not just covers)."""
        keep = [self.index(e) for e in dict.fromkeys(subset)]
        pos = {i: k for k, i in enumerate(keep)}
        up = []
        for i in keep:
            mask = 0
            for j in iter_bits(self._up[i]):
                k = pos.get(j)
                if k is not None:
                    mask |= 1 << k
            up.append(mask)
        els = [self._elements[i] for i in keep]
        return Poset.from_up_masks(els, up, {e: self._labels[e] for e in els if e in self._labels})

    def relabel(self, mapping: Mapping) -> "Poset":
        """Rename element ids; labels follow their elements."""
        els = [mapping[e] for e in self._elements]
        labels = {mapping[e]: lab for e, lab in self._labels.items()}
        return Poset.from_up_masks(els, self._up, labels)

    def to_dot(self, name: str = "poset") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i, e in enumerate(self._elements):
            text = str(self._labels.get(e, e)).replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  n{i} [label="{text}"];')
        for i, m in enumerate(self._covers_of()):
            for j in iter_bits(m):
                lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


class BoundedPoset(Poset):
    """A poset with a greatest and a least element."""

    @property
    def top(self):
        return self._top

    @property
    def bottom(self):
        return self._bottom

    @classmethod
    def of(cls, p: Poset) -> "BoundedPoset":
        n = len(p)
        if n == 0:
            raise PosetError("empty poset has no bounds")
        full = (1 << n) - 1
        tops = [i for i in range(n) if p.down_mask(i) == full]
        bottoms = [i for i in range(n) if p.up_mask(i) == full]
        if not tops or not bottoms:
            raise PosetError("poset is not bounded")
        b = cls.from_up_masks(p.elements, p._up, p.labels)
        b._top = p.elements[tops[0]]
        b._bottom = p.elements[bottoms[0]]
        return b

    def relabel(self, mapping):
        return BoundedPoset.of(super().relabel(mapping))


def is_bounded(p: Poset) -> bool:
    try:
        BoundedPoset.of(p)
    except PosetError:
        return False
    return True


# -- law checking ---------------------------------------------------------


@dataclass
class LawReport:
    reflexivity: list = field(default_factory=list)
    antisymmetry: list = field(default_factory=list)
    transitivity: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.reflexivity or self.antisymmetry or self.transitivity)

    def summary(self) -> str:
        if self.ok:
            return "no violations"
        parts = []
        if self.reflexivity:
            parts.append(f"reflexivity fails at {self.reflexivity[0]!r}")
        if self.antisymmetry:
            a, b = self.antisymmetry[0]
            parts.append(f"antisymmetry fails: {a!r} <= {b!r} <= {a!r}")
        if self.transitivity:
            a, b, c = self.transitivity[0]
            parts.append(f"transitivity fails: {a!r} <= {b!r} <= {c!r} but not {a!r} <= {c!r}")
        total = len(self.reflexivity) + len(self.antisymmetry) + len(self.transitivity)
        return f"{total} violation(s); " + "; ".join(parts)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "reflexivity": [repr(x) for x in self.reflexivity],
            "antisymmetry": [[repr(x) for x in pair] for pair in self.antisymmetry],
            "transitivity": [[repr(x) for x in t] for t in self.transitivity],
        }


class Relation:
    """A raw binary relation, used to audit things that might not be posets."""

    def __init__(self, elements, pairs, closure: bool = False):
        self.elements = tuple(elements)
        pairs = set(pairs)
        if closure:
            index = {e: i for i, e in enumerate(self.elements)}
            reach = [1 << i for i in range(len(self.elements))]
            for a, b in pairs:
                reach[index[a]] |= 1 << index[b]
            changed = True
            while changed:
                changed = False
                for i, mask in enumerate(reach):
                    new = mask
                    for j in iter_bits(mask):
                        new |= reach[j]
                    if new != mask:
                        reach[i] = new
                        changed = True
            els = self.elements
            pairs = {(els[i], els[j]) for i, m in enumerate(reach) for j in iter_bits(m)}
        self.pairs = frozenset(pairs)

    def leq(self, a, b) -> bool:
        return (a, b) in self.pairs


def check_poset_laws(p, limit: int | None = None) -> LawReport:
    """Exhaustively check reflexivity, antisymmetry and transitivity.

    ``p`` is anything with ``elements`` and ``leq(a, b)``. For a ``Poset`` the
    check runs on bitmasks; otherwise it is the plain cubic triple loop.
    """
    if isinstance(p, Poset):
        return check_masks(p.elements, p._up, limit)
    report = LawReport()
    els = p.elements
    for a in els:
        if not p.leq(a, a):
            report.reflexivity.append(a)
    for a, b in itertools.combinations(els, 2):
        if p.leq(a, b) and p.leq(b, a):
            report.antisymmetry.append((a, b))
    for a, b, c in itertools.product(els, repeat=3):
        if p.leq(a, b) and p.leq(b, c) and not p.leq(a, c):
            report.transitivity.append((a, b, c))
            if limit and len(report.transitivity) >= limit:
                break
    return report


def check_masks(elements, up, limit: int | None = None) -> LawReport:
    report = LawReport()
    for i, mask in enumerate(up):
        if not mask >> i & 1:
            report.reflexivity.append(elements[i])
        for j in iter_bits(mask & ~(1 << i)):
            if j > i and up[j] >> i & 1:
                report.antisymmetry.append((elements[i], elements[j]))
            missing = up[j] & ~mask
            for k in iter_bits(missing):
                report.transitivity.append((elements[i], elements[j], elements[k]))
                if limit and len(report.transitivity) >= limit:
                    return report
    return report


def sample_law_check(p: Poset, n_triples: int, rng) -> LawReport:
    """Check the laws on ``n_triples`` random triples via ``leq`` alone."""
    report = LawReport()
    els = p.elements
    for _ in range(n_triples):
        a, b, c = rng.choice(els), rng.choice(els), rng.choice(els)
        if not p.leq(a, a):
            report.reflexivity.append(a)
        if a != b and p.leq(a, b) and p.leq(b, a):
            report.antisymmetry.append((a, b))
        if p.leq(a, b) and p.leq(b, c) and not p.leq(a, c):
            report.transitivity.append((a, b, c))
    return report


# -- queries over a whole poset -------------------------------------------


def leq(p: Poset, a, b) -> bool:
    return p.leq(a, b)


def comparable_pairs(p: Poset) -> list[tuple]:
    """All pairs ``(a, b)`` with ``a <= b``, reflexive pairs included."""
    els = p.elements
    return [(els[i], els[j]) for i in range(len(els)) for j in iter_bits(p.up_mask(i))]


def chain(n: int, prefix: str = "c") -> BoundedPoset:
    els = [f"{prefix}{i}" for i in range(n)]
    return BoundedPoset.of(Poset(els, zip(els, els[1:])))


def antichain(n: int, prefix: str = "a") -> Poset:
    return Poset([f"{prefix}{i}" for i in range(n)])


# -- isomorphism ----------------------------------------------------------


def _signature(p: Poset, i: int) -> tuple:
    cov = p._covers_of()
    down_cov = sum(1 for j in range(len(p)) if cov[j] >> i & 1)
    return (p.up_mask(i).bit_count(), p.down_mask(i).bit_count(), cov[i].bit_count(), down_cov)


def find_isomorphism(p: Poset, q: Poset) -> dict | None:
    """Return an order isomorphism ``p -> q`` as a dict, or ``None``.

    Backtracking over elements in order of increasing down-set size; candidates
    must agree on up/down-set sizes and cover degrees, and every partial map
    must preserve and reflect the order against all previously mapped pairs.
    """
    n = len(p)
    if n != len(q) or p.count_comparable() != q.count_comparable():
        return None
    sig_p = [_signature(p, i) for i in range(n)]
    sig_q = [_signature(q, i) for i in range(n)]
    if sorted(sig_p) != sorted(sig_q):
        return None
    order = sorted(range(n), key=lambda i: (sig_p[i][1], sig_p[i]))
    by_sig: dict[tuple, list[int]] = {}
    for j in range(n):
        by_sig.setdefault(sig_q[j], []).append(j)

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(i, j):
        for a, b in mapping.items():
            if bool(p.up_mask(i) >> a & 1) != bool(q.up_mask(j) >> b & 1):
                return False
            if bool(p.up_mask(a) >> i & 1) != bool(q.up_mask(b) >> j & 1):
                return False
        return True

    def search(k):
        if k == n:
            return True
        i = order[k]
        for j in by_sig[sig_p[i]]:
            if j in used or not consistent(i, j):
                continue
            mapping[i] = j
            used.add(j)
            if search(k + 1):
                return True
            del mapping[i]
            used.discard(j)
        return False

    if not search(0):
        return None
    return {p.elements[i]: q.elements[j] for i, j in mapping.items()}


def order_isomorphic(p: Poset, q: Poset) -> bool:
    return find_isomorphism(p, q) is not None
