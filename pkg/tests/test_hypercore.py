import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from hyperturan.errors import InputError, UndefinedValueError
from hyperturan.hypercore import (
    Hypergraph,
    PartiteHypergraph,
    average_degree,
    codegree_function,
    complete,
    degree,
    format_edge_list,
    induced,
    is_independent,
    is_subgraph,
    log_binomial,
    max_degree,
    parse_edge_list,
    remove_edges,
    shadow,
    subgraph,
)


@st.composite
def hypergraphs(draw, max_n=8, rs=(2, 3, 4)):
    r = draw(st.sampled_from(rs))
    n = draw(st.integers(r, max_n))
    pool = list(combinations(range(n), r))
    edges = draw(st.lists(st.sampled_from(pool), unique=True, max_size=20))
    return Hypergraph(n, r, edges)


def test_edges_are_canonical():
    G = Hypergraph(5, 3, [(4, 1, 2), (0, 1, 2)])
    assert G.edges == ((0, 1, 2), (1, 2, 4))
    assert G.edge_id((2, 4, 1)) == 1


@pytest.mark.parametrize("bad", [[(0, 0, 1)], [(0, 1)], [(0, 1, 7)], [(0, 1, 2), (2, 1, 0)]])
def test_malformed_edges_rejected(bad):
    with pytest.raises(InputError):
        Hypergraph(5, 3, bad)


def test_degrees_on_complete_graph():
    G = complete(6, 3)
    assert degree(G, [0]) == math.comb(5, 2)
    assert degree(G, [0, 1]) == 4
    assert degree(G, [0, 1, 2]) == 1
    assert [max_degree(G, j) for j in (1, 2, 3)] == [10, 4, 1]
    assert average_degree(G) == Fraction(3 * 20, 6)


def test_degree_rejects_oversized_sets():
    with pytest.raises(InputError):
        degree(complete(5, 2), [0, 1, 2])


def test_codegree_function_by_hand():
    G = complete(4, 3)  # d = 3, Delta_2 = 2, Delta_3 = 1
    tau = 0.25
    assert codegree_function(G, tau) == pytest.approx((2 / tau + 1 / tau ** 2) / 3)


def test_codegree_function_errors():
    with pytest.raises(UndefinedValueError):
        codegree_function(Hypergraph(4, 3), 0.25)
    with pytest.raises(InputError):
        codegree_function(complete(4, 3), 1.0)


def test_edgeless_average_degree_is_zero_and_n0_is_rejected():
    assert average_degree(Hypergraph(3, 2)) == 0
    with pytest.raises(InputError):
        average_degree(Hypergraph(0, 2))


@settings(max_examples=80, deadline=None)
@given(hypergraphs())
def test_max_degree_matches_tuple_scan(G):
    for j in range(1, G.r + 1):
        best = 0
        for sigma in combinations(range(G.n), j):
            best = max(best, sum(1 for e in G.edges if set(sigma) <= set(e)))
        assert max_degree(G, j) == best


@settings(max_examples=60, deadline=None)
@given(hypergraphs())
def test_edge_list_round_trip(G):
    assert parse_edge_list(format_edge_list(G)) == G


@settings(max_examples=60, deadline=None)
@given(hypergraphs(), st.data())
def test_subgraph_operations(G, data):
    A = data.draw(st.sets(st.integers(0, G.n - 1)))
    H = induced(G, A)
    assert is_subgraph(H, G)
    assert all(set(e) <= A for e in H.edges)
    ids = data.draw(st.sets(st.integers(0, max(0, G.num_edges - 1)), max_size=G.num_edges))
    ids = {i for i in ids if i < G.num_edges}
    S = subgraph(G, ids)
    assert S.num_edges == len(ids)
    R = remove_edges(G, S.edges)
    assert R.num_edges + S.num_edges == G.num_edges


def test_remove_non_edge_rejected():
    with pytest.raises(InputError):
        remove_edges(complete(4, 3), [(0, 1, 5)])


def test_independence():
    G = Hypergraph(5, 2, [(0, 1), (2, 3)])
    assert is_independent(G, [0, 2, 4])
    assert not is_independent(G, [0, 1])


def test_partite_validation_and_shadow():
    base = Hypergraph(6, 3, [(0, 2, 4), (1, 3, 5), (0, 3, 4)])
    P = PartiteHypergraph(base, ({0, 1}, {2, 3}, {4, 5}))
    sh = shadow(P, 1, 2)
    assert sh.pairs == {(0, 2), (1, 3), (0, 3)}
    assert P.oriented((0, 3, 4)) == (0, 3, 4)
    with pytest.raises(InputError):
        PartiteHypergraph(base, ({0, 2}, {1, 3}, {4, 5}))
    with pytest.raises(InputError):
        shadow(P, 2, 2)


def test_parse_rejects_garbage():
    with pytest.raises(InputError):
        parse_edge_list("")
    with pytest.raises(InputError):
        parse_edge_list("3 2\n0 x\n")


def test_log_binomial():
    assert log_binomial(10, 3) == pytest.approx(math.log(120))
    assert log_binomial(3, 5) == -math.inf


@pytest.mark.parametrize(
    "G, tau, want",
    [
        (Hypergraph(3, 3, [(0, 1, 2)]), 0.5, 6.0),
        (complete(4, 2), 0.5, 2 / 3),
        (complete(4, 3), 0.5, 8 / 3),
    ],
)
def test_codegree_function_spot_values(G, tau, want):
    assert codegree_function(G, tau) == pytest.approx(want)


def test_small_degree_values():
    assert degree(complete(4, 2), [0]) == 3
    assert degree(complete(5, 3), [0, 1]) == 3
    assert degree(Hypergraph(4, 3, [(0, 1, 2)]), [0, 3]) == 0
    assert max_degree(complete(5, 3), 2) == 3
    assert max_degree(Hypergraph(4, 2), 1) == 0
    assert average_degree(Hypergraph(3, 3, [(0, 1, 2)])) == 1
    assert is_independent(Hypergraph(4, 3), range(4))
    assert not is_independent(Hypergraph(4, 3, [(0, 1, 2)]), [0, 1, 2, 3])
    assert induced(complete(4, 3), {0, 1, 2}).num_edges == 1
    assert remove_edges(complete(4, 3), complete(4, 3).edges).num_edges == 0


def test_complete_partite_shadow_size():
    parts = ({0, 1}, {2, 3}, {4, 5})
    edges = [(a, b, c) for a in parts[0] for b in parts[1] for c in parts[2]]
    P = PartiteHypergraph(Hypergraph(6, 3, edges), parts)
    assert len(shadow(P, 1, 2)) == 4
    assert len(shadow(PartiteHypergraph(Hypergraph(6, 3), parts), 1, 2)) == 0
