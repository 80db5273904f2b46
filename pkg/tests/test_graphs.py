import json
from fractions import Fraction
from itertools import permutations

import pytest

from weylhp.beg import beg_is_zero
from weylhp.graphs import (
    GraphCombination,
    GraphSpec,
    catalog,
    catalog_independent,
    compose,
    compose_graphs,
    graph_of,
    partition_graphs,
    path_graph,
    polynomial_of,
    simple_graph_search,
)
from weylhp.poly import Polynomial, RankError, parse
from weylhp.sl2 import PfaffianWord
from weylhp.weyl import SignedPermutation, WeylGroup, act, partition_count, reynolds

from .oracles import partitions_bruteforce

B2, D2, B3, B4, D4 = (WeylGroup.parse(g) for g in ("B2", "D2", "B3", "B4", "D4"))
EDGE = GraphSpec(((1, 2, 2),))


def test_graph_of_examples():
    g = graph_of(PfaffianWord.parse("X[1,2]^4 * X[1,3]^2 * X[1,4]^2", 4))
    assert g.edges == ((1, 2, 4), (1, 3, 2), (1, 4, 2))
    assert g.vertex_count == 4
    assert sorted(b for _, _, b in g.edges) == [2, 2, 4]
    assert graph_of(PfaffianWord.parse("X[1,2]^2", 2)) == EDGE
    assert graph_of(PfaffianWord(3)).edges == ()


def test_rendering_labels():
    g = GraphSpec(((1, 2, 4), (2, 3, 1)))
    assert g.rendered() == [(1, 2, 2), (2, 3, "1*")]


def test_canonical_form_is_isomorphism_invariant():
    g = graph_of(PfaffianWord.parse("X[1,2]^4 * X[1,3]^2 * X[2,4]^2", 4))
    forms = {g.relabeled(dict(zip(range(1, 5), p))).canonical() for p in permutations(range(1, 5))}
    assert len(forms) == 1


def test_polynomial_of_examples():
    assert polynomial_of(EDGE, B2) == reynolds(B2, parse("X[1,2]^2", 2))
    assert polynomial_of(GraphSpec(((1, 2, 1), (2, 3, 1))), B3).is_zero()
    assert polynomial_of(GraphSpec(((1, 2, 1),)), B2).is_zero()
    with pytest.raises(RankError):
        polynomial_of(path_graph(3), B2)


def test_odd_graph_b4_vs_d4():
    g = GraphSpec(((1, 2, 1), (1, 3, 1), (1, 4, 1)))
    assert polynomial_of(g, B4).is_zero()
    assert not polynomial_of(g, D4).is_zero()


def test_orbit_constancy():
    word = PfaffianWord.parse("X[1,2]^2 * X[2,3]^4", 3)
    ref = polynomial_of(graph_of(word), B3)
    for sigma in permutations(range(3)):
        assert polynomial_of(graph_of(word.relabel(sigma)).canonical(), B3) == ref


@pytest.mark.parametrize("n", range(1, 9))
def test_partition_graph_count(n):
    graphs = partition_graphs(n)
    assert len(graphs) == partition_count(n) == len(partitions_bruteforce(n))
    for g in graphs:
        assert g.vertex_count <= n


def test_partition_graph_examples():
    two = {str(c) for c in partition_graphs(2)}
    assert two == {"1", "X[1,2]^2"}
    three = [c.graphs[0] for c in partition_graphs(3)]
    assert {g.edges for g in three} == {(), ((1, 2, 2),), ((1, 2, 2), (2, 3, 2))}


def test_compose_examples():
    a = reynolds(B2, parse("X[1,2]^2", 2)).with_rank(4)
    # the rank-2 average of X[3,4]^2, acting on indices 3 and 4 only
    b = act(SignedPermutation((2, 3, 0, 1), (1,) * 4), a)
    c = compose(a, b, B4)
    assert c == reynolds(B4, parse("X[1,2]^2 * X[3,4]^2", 4))
    assert beg_is_zero(B4, c)
    one = Polynomial.constant(3)
    s = reynolds(B3, parse("X[1,2]^2", 3))
    assert compose(one, s, B3) == s
    with pytest.raises(ValueError):
        compose(s, s, B3)


def test_compose_edge_and_empty_at_rank3():
    combo = compose_graphs(GraphCombination.single(EDGE), GraphCombination.single(GraphSpec()))
    assert combo.solves(B3)


def test_rank_stability():
    edge = GraphCombination.single(EDGE)
    for n in (2, 3, 4):
        assert edge.solves(WeylGroup("B", n))
    # the identity graph (constant) solves for D at every rank
    const = GraphCombination.single(GraphSpec())
    for n in (2, 4):
        assert const.solves(WeylGroup("D", n))


def test_simple_graphs_small_ranks():
    r2 = simple_graph_search(B2)
    assert r2.status == "unique" and r2.combination().graphs[0].canonical() == EDGE.canonical()
    r3 = simple_graph_search(B3)
    assert r3.status == "unique"
    assert r3.combination().graphs[0].canonical() == path_graph(3).canonical()


def test_catalog_b2_b3():
    for w, hp0 in ((B2, 2), (B3, 3)):
        entries = catalog(w)
        assert len(entries) == hp0 and all(e.verified for e in entries)
        assert catalog_independent(entries, w) == hp0


def test_graph_json_round_trip():
    g = GraphSpec(((1, 2, 4), (1, 3, 2)))
    data = json.loads(json.dumps(g.to_dict()))
    assert data == {"edges": [{"i": 1, "j": 2, "exp": 4}, {"i": 1, "j": 3, "exp": 2}]}
    assert GraphSpec.from_dict(data) == g
    combo = GraphCombination(((g, Fraction(-1, 3)),))
    assert combo.to_dict()["graphs"][0]["coeff"] == "-1/3"


def test_catalog_only_type_b():
    with pytest.raises(ValueError):
        catalog(D4)
