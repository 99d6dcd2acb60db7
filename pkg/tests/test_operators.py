import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from gensub.operators import ConstructionError, WcPolicy, intervals, ppp, wc
from gensub.poset import BoundedPoset, Poset, PosetError, antichain, chain, check_poset_laws
from gensub.terms import ArgKind

from test_poset import random_dag


def distinct_intervals_wc(n):
    """Brute force: the three intervals per element of a chain 0..n-1, deduplicated."""
    ivs = set()
    for t in range(n):
        ivs |= {(t, t), (0, t), (t, n - 1)}
    return len(ivs)


def by_label(p):
    return {p.label(e): e for e in p.elements}


def embeds_by_label(small, big):
    a, b = by_label(small), by_label(big)
    if not set(a) <= set(b):
        return False
    return all(small.leq(a[x], a[y]) == big.leq(b[x], b[y]) for x in a for y in a)


# -- ppp -------------------------------------------------------------------------


def test_ppp_without_generics_is_identity():
    C = Poset(["top"])
    out = ppp(C, [], chain(3))
    assert out.elements == ("top",)


def test_ppp_single_argument():
    C = chain(3)  # c0=Null, c1=List, c2=Object
    out = ppp(C, ["c1"], Poset(["a"]))
    assert set(out.elements) == {"c0", ("c1", "a"), "c2"}
    assert out.leq("c0", ("c1", "a")) and out.leq(("c1", "a"), "c2")
    assert out.covers == {("c0", ("c1", "a")), (("c1", "a"), "c2")}


def test_ppp_orders_pairs_componentwise():
    C = Poset(["N", "L", "LL", "O"], [("N", "LL"), ("LL", "L"), ("L", "O")])
    A = chain(3, "a")
    out = ppp(C, ["L", "LL"], A)
    for a in A:
        assert out.leq(("LL", a), ("L", a))
    assert out.leq(("LL", "a0"), ("L", "a2"))
    assert not out.leq(("LL", "a2"), ("L", "a0"))
    assert not out.leq(("L", "a0"), ("LL", "a0"))
    assert check_poset_laws(out).ok


def test_ppp_restrictions():
    C = Poset(["N", "P", "L", "LL", "O"], [("N", "P"), ("N", "LL"), ("LL", "L"), ("L", "O"), ("P", "O")])
    A = Poset(["x", "y", "z"], [("x", "z")])
    out = ppp(C, ["L", "LL"], A)
    plain = ["N", "P", "O"]
    for a, b in itertools.product(plain, repeat=2):
        assert out.leq(a, b) == C.leq(a, b)
    for a in A:
        for g, h in itertools.product(["L", "LL"], repeat=2):
            assert out.leq((g, a), (h, a)) == C.leq(g, h)


def test_ppp_guard_catches_plain_between_generics():
    # hierarchy invariants bypassed: plain P sits strictly between generic G1 and G2
    C = Poset(["N", "G1", "P", "G2", "O"], [("N", "G1"), ("G1", "P"), ("P", "G2"), ("G2", "O")])
    with pytest.raises(ConstructionError) as exc:
        ppp(C, ["G1", "G2"], antichain(2))
    assert "transitivity" in str(exc.value)


def test_ppp_monotone_in_argument_poset():
    C = Poset(["N", "L", "O"], [("N", "L"), ("L", "O")])
    A = chain(2, "a")
    A2 = Poset(["a0", "a1", "b"], [("a0", "a1"), ("a0", "b")])
    small, big = ppp(C, ["L"], A), ppp(C, ["L"], A2)
    for x, y in itertools.product(small.elements, repeat=2):
        assert small.leq(x, y) == big.leq(x, y)


# -- wc -------------------------------------------------------------------------


@pytest.mark.parametrize("n", range(2, 8))
def test_wc_cardinality_on_chains(n):
    assert len(wc(chain(n), WcPolicy.PAPER)) == 3 * n - 2
    assert len(wc(chain(n), WcPolicy.SEMANTIC)) == distinct_intervals_wc(n) == 3 * n - 3


def test_wc_frozen_counts():
    assert [len(wc(chain(n))) for n in (2, 3)] == [4, 7]
    assert len(wc(chain(3), "semantic")) == 6


def test_wc_requires_bounds():
    with pytest.raises(PosetError):
        wc(antichain(2))


def test_wc_exact_contained_in_both_wildcards():
    S = chain(3)
    W = wc(S)
    lab = by_label(W)
    for t in S:
        ex = next(e for e in W if W.label(e).kind is ArgKind.EXACT and W.label(e).lower == t)
        for e in W:
            a = W.label(e)
            if a.kind is ArgKind.UPPER and a.upper == t or a.kind is ArgKind.LOWER and a.lower == t:
                assert W.leq(ex, e)
    assert len(lab) == len(W)


def test_wc_paper_keeps_super_top_above_exact_top():
    W = wc(chain(3), WcPolicy.PAPER)
    sup_top = [e for e in W if W.label(e).kind is ArgKind.LOWER and W.label(e).lower == "c2"]
    ex_top = [e for e in W if W.label(e).kind is ArgKind.EXACT and W.label(e).lower == "c2"]
    assert W.lt(ex_top[0], sup_top[0])
    assert check_poset_laws(W).ok


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 8))
def test_wc_cardinality_bounded_random(seed, n_mid):
    els, edges = random_dag(random.Random(seed), n_mid)
    edges += [("bot", e) for e in els] + [(e, "top") for e in els] + [("bot", "top")]
    S = BoundedPoset.of(Poset(["bot", *els, "top"], edges))
    n = len(S)
    assert len(wc(S, "paper")) == 3 * n - 2
    assert len(wc(S, "semantic")) == 3 * n - 3
    assert check_poset_laws(wc(S, "paper")).ok


# -- intervals --------------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 8))
def test_intervals_on_chains(n):
    brute = sum(1 for i in range(n) for j in range(i, n))
    assert len(intervals(chain(n))) == brute == n * (n + 1) // 2


def test_interval_containment_rule():
    S = Poset(["Null", "Integer", "Number", "String", "Object"],
              [("Null", "Integer"), ("Integer", "Number"), ("Number", "Object"),
               ("Null", "String"), ("String", "Object")])
    I = intervals(BoundedPoset.of(S))
    iv = {(I.label(e).lower, I.label(e).upper): e for e in I}
    for t in S:
        assert I.leq(iv[t, t], iv["Null", t]) and I.leq(iv[t, t], iv[t, "Object"])
    assert I.leq(iv["Integer", "Number"], iv["Null", "Object"])
    assert not I.leq(iv["Integer", "Number"], iv["String", "Object"])
    # brute-force containment check on every pair
    for (s, t), x in iv.items():
        for (u, v), y in iv.items():
            assert I.leq(x, y) == (S.leq(u, s) and S.leq(t, v))


def test_wc_semantic_embeds_into_intervals():
    S = chain(4)
    W, I = wc(S, "semantic"), intervals(S)
    iv = {(I.label(e).lower, I.label(e).upper): e for e in I}
    image = {w: iv[W.label(w).lower, W.label(w).upper] for w in W}
    assert len(set(image.values())) == len(W)
    for a, b in itertools.product(W.elements, repeat=2):
        assert W.leq(a, b) == I.leq(image[a], image[b])
    assert len(I) > len(W)


def test_wc_and_intervals_monotone(table):
    from gensub.construction import Options, build_subtyping

    for mode in ("wildcards", "intervals"):
        S0 = build_subtyping(table, 0, Options(mode)).poset
        S1 = build_subtyping(table, 1, Options(mode)).poset
        op = intervals if mode == "intervals" else wc
        assert embeds_by_label(op(S0), op(S1))
