import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from lassodof.errors import InputError
from lassodof.linalg import nullity, numeric_rank
from lassodof.penalties import (
    chain_graph,
    connected_components,
    diff_1d,
    difference_operator,
    fused_groups,
    graph_incidence,
    identity_penalty,
    knot_count,
    penalty_from_spec,
    trend_filter_penalty,
)
from lassodof.schemas import GraphEdges


def union_find_components(node_count, edges):
    parent = list(range(node_count))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(i) for i in range(node_count)})


def test_diff_1d_rows():
    assert_array_equal(diff_1d(3), [[-1, 1, 0], [0, -1, 1]])


def test_diff_1d_needs_two_points():
    with pytest.raises(InputError):
        diff_1d(1)


def test_identity_penalty():
    assert_array_equal(identity_penalty(4), np.eye(4))


@pytest.mark.parametrize("order", [1, 2, 3])
def test_difference_operator_annihilates_low_degree_polynomials(order):
    p = 12
    t = np.arange(p, dtype=float)
    D = difference_operator(p, order)
    assert D.shape == (p - order, p)
    for degree in range(order):
        assert_allclose(D @ t**degree, 0.0, atol=1e-9)
    assert np.abs(D @ t**order).max() > 0


def test_second_difference_rows():
    assert_array_equal(difference_operator(4, 2), [[1, -2, 1, 0], [0, 1, -2, 1]])


@pytest.mark.parametrize("k", [0, 1, 2])
def test_trend_filter_nullity_is_k_plus_one(k):
    if k == 0:
        D = diff_1d(10)
    else:
        D = trend_filter_penalty(10, k)
    assert nullity(D) == k + 1


def test_trend_filter_needs_enough_points():
    with pytest.raises(InputError):
        trend_filter_penalty(3, 2)


def test_chain_incidence_matches_first_differences():
    assert_array_equal(graph_incidence(chain_graph(5)), diff_1d(5))


def test_incidence_orientation_puts_minus_one_on_lower_index():
    D = graph_incidence(GraphEdges(node_count=3, edges=[(2, 0)]))
    assert_array_equal(D, [[-1, 0, 1]])


@settings(max_examples=50, deadline=None)
@given(
    st.integers(1, 9).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(
                st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1]),
                max_size=12,
            ),
        )
    )
)
def test_components_match_union_find(case):
    n, edges = case
    g = GraphEdges(node_count=n, edges=edges)
    assert connected_components(g) == union_find_components(n, edges)
    # rank of an incidence matrix is nodes minus components
    if edges:
        assert numeric_rank(graph_incidence(g)) == n - connected_components(g)


def test_fused_groups_on_chain():
    beta = np.array([1.0, 1.0, 2.0, 2.0, 2.0, -1.0])
    assert fused_groups(chain_graph(6), beta) == 3


def test_fused_groups_on_a_cycle():
    g = GraphEdges(node_count=4, edges=[(0, 1), (1, 2), (2, 3), (3, 0)])
    assert fused_groups(g, [0.0, 0.0, 5.0, 0.0]) == 2


def test_knot_count():
    t = np.arange(10, dtype=float)
    kinked = np.minimum(t, 4.0)
    assert knot_count(t, 1) == 0
    assert knot_count(kinked, 1) == 1


def test_graph_edges_reject_bad_nodes():
    with pytest.raises(ValueError):
        GraphEdges(node_count=2, edges=[(0, 2)])
    with pytest.raises(ValueError):
        GraphEdges(node_count=2, edges=[(1, 1)])


def test_penalty_from_spec(tmp_path):
    edges = tmp_path / "edges.csv"
    edges.write_text("0,1\n1,2\n0,3\n")
    assert_array_equal(penalty_from_spec("identity", 3), np.eye(3))
    assert_array_equal(penalty_from_spec("chain", 3), diff_1d(3))
    assert_array_equal(penalty_from_spec("trend:1", 5), difference_operator(5, 2))
    assert penalty_from_spec(f"graph:{edges}", 4).shape == (3, 4)


@pytest.mark.parametrize("spec", ["ridge", "trend:x", "trend:0"])
def test_penalty_from_spec_rejects(spec):
    with pytest.raises(InputError):
        penalty_from_spec(spec, 5)
