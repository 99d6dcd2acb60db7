import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from gensub.poset import (
    BoundedPoset,
    ElementNotFound,
    Poset,
    PosetError,
    Relation,
    antichain,
    chain,
    check_poset_laws,
    comparable_pairs,
    find_isomorphism,
    order_isomorphic,
)


def random_dag(rng, n, p=0.3):
    els = [f"e{i}" for i in range(n)]
    perm = els[:]
    rng.shuffle(perm)
    edges = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return els, edges


def reach_oracle(els, edges):
    """Reflexive-transitive reachability by plain DFS."""
    succ = {e: [] for e in els}
    for a, b in edges:
        succ[a].append(b)
    out = set()
    for s in els:
        stack, seen = [s], {s}
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out |= {(s, y) for y in seen}
    return out


@st.composite
def posets(draw, max_size=12):
    n = draw(st.integers(1, max_size))
    seed = draw(st.integers(0, 10**6))
    els, edges = random_dag(random.Random(seed), n, draw(st.floats(0.0, 0.6)))
    return Poset(els, edges)


def test_leq_basics():
    c = chain(3)
    assert c.leq("c0", "c2")
    assert not c.leq("c2", "c0")
    for x in c:
        assert c.leq(x, x)
    a = antichain(2)
    assert not a.leq("a0", "a1")


def test_unknown_element():
    with pytest.raises(ElementNotFound):
        chain(3).leq("c0", "zz")


def test_cycle_rejected():
    with pytest.raises(PosetError):
        Poset("ab", [("a", "b"), ("b", "a")])


def test_covers_are_transitive_reduction():
    p = Poset("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    assert p.covers == {("a", "b"), ("b", "c")}


def test_laws_on_chain_and_on_cycle():
    assert check_poset_laws(chain(3)).ok
    rel = Relation("ab", [("a", "b"), ("b", "a")], closure=True)
    rep = check_poset_laws(rel)
    assert rep.antisymmetry == [("a", "b")]
    assert not rep.transitivity and not rep.reflexivity


def test_laws_catch_non_transitive_relation():
    rel = Relation("abc", {(x, x) for x in "abc"} | {("a", "b"), ("b", "c")})
    rep = check_poset_laws(rel)
    assert rep.transitivity == [("a", "b", "c")]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 7])
def test_chain_comparable_pairs(n):
    brute = sum(1 for i in range(n) for j in range(n) if i <= j)
    assert len(comparable_pairs(chain(n))) == brute


def test_comparable_pairs_small_cases():
    assert len(comparable_pairs(chain(4))) == 10
    assert len(comparable_pairs(antichain(3))) == 3
    assert len(comparable_pairs(antichain(1))) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 20))
def test_closure_and_pairs_match_dfs(seed, n):
    els, edges = random_dag(random.Random(seed), n)
    p = Poset(els, edges)
    expected = reach_oracle(els, edges)
    assert set(comparable_pairs(p)) == expected
    for a, b in itertools.product(els, repeat=2):
        assert p.leq(a, b) == ((a, b) in expected)
    assert check_poset_laws(p).ok
    # covers regenerate the same order
    assert set(comparable_pairs(Poset(els, p.covers))) == expected


def test_bounded():
    b = BoundedPoset.of(chain(3))
    assert (b.bottom, b.top) == ("c0", "c2")
    with pytest.raises(PosetError):
        BoundedPoset.of(antichain(2))


def test_isomorphism_examples():
    assert order_isomorphic(chain(3), chain(3, "z"))
    assert not order_isomorphic(chain(3), antichain(3))
    diamond = Poset("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    assert order_isomorphic(diamond, diamond.relabel({"a": 1, "b": 2, "c": 3, "d": 4}))


def hasse_graph(p):
    g = nx.DiGraph()
    g.add_nodes_from(p.elements)
    g.add_edges_from(p.covers)
    return g


@settings(max_examples=80, deadline=None)
@given(posets(), posets())
def test_isomorphism_agrees_with_networkx(p, q):
    expected = nx.is_isomorphic(hasse_graph(p), hasse_graph(q))
    assert order_isomorphic(p, q) == expected


@settings(max_examples=40, deadline=None)
@given(posets(), st.randoms(use_true_random=False))
def test_isomorphism_reflexive_symmetric_relabel_invariant(p, rnd):
    ids = list(p.elements)
    new = [f"r{i}" for i in range(len(ids))]
    rnd.shuffle(new)
    q = p.relabel(dict(zip(ids, new)))
    assert order_isomorphic(p, p)
    assert order_isomorphic(p, q) and order_isomorphic(q, p)
    m = find_isomorphism(p, q)
    for a, b in itertools.product(ids, repeat=2):
        assert p.leq(a, b) == q.leq(m[a], m[b])


def test_restrict_keeps_inherited_order():
    p = chain(4)
    r = p.restrict(["c0", "c3"])
    assert r.leq("c0", "c3") and r.covers == {("c0", "c3")}


def test_dot_output():
    p = Poset("ab", [("a", "b")], labels={"a": "Null", "b": 'Obj"ect'})
    dot = p.to_dot()
    assert 'label="Null"' in dot and 'label="Obj\\"ect"' in dot
    assert "n0 -> n1;" in dot
