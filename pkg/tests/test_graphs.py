import numpy as np
import pytest

from blockroute import HostGraph, Hypergraph, bfs_distances, clique_expansion, generate_regular, set_distance


def test_k4_is_unique_cubic_graph_on_four_vertices():
    g = generate_regular(4, 3, seed=123)
    assert g.n_edges == 6
    assert np.array_equal(g.to_dense(), np.ones((4, 4)) - np.eye(4))


@pytest.mark.parametrize("n,d", [(5, 3), (10, 10), (6, -1)])
def test_generate_rejects_bad_parameters(n, d):
    with pytest.raises(ValueError):
        generate_regular(n, d, seed=0)


@pytest.mark.parametrize("n,d,seed", [(50, 3, 0), (200, 10, 1), (1000, 60, 2)])
def test_generated_graph_is_simple_regular_connected(n, d, seed):
    g = generate_regular(n, d, seed)
    g.audit()
    assert g.degree == d
    assert np.all(g.degrees() == d)
    assert g.is_connected()
    assert g.n_edges == n * d // 2
    edges = g.edge_array()
    assert np.all(edges[:, 0] < edges[:, 1])
    assert len({tuple(e) for e in edges}) == len(edges)


def test_generation_is_deterministic_in_seed():
    a = generate_regular(300, 20, seed=5)
    b = generate_regular(300, 20, seed=5)
    c = generate_regular(300, 20, seed=6)
    assert np.array_equal(a.indices, b.indices)
    assert not np.array_equal(a.indices, c.indices)


def test_dense_regime_still_generates():
    g = generate_regular(30, 27, seed=3)
    assert np.all(g.degrees() == 27)


def test_clique_expansion_of_single_hyperedge():
    g = clique_expansion(Hypergraph(3, ((0, 1, 2),), 3))
    assert g.n_edges == 3
    assert g.has_edge(0, 1) and g.has_edge(1, 2) and g.has_edge(0, 2)


def test_clique_expansion_degree_is_d_times_r_minus_one():
    # two disjoint hyperedge families forming a 2-regular 3-uniform linear hypergraph on 9 vertices
    rows = [(0, 1, 2), (3, 4, 5), (6, 7, 8)]
    cols = [(0, 3, 6), (1, 4, 7), (2, 5, 8)]
    h = Hypergraph(9, tuple(rows + cols), 3)
    g = clique_expansion(h)
    assert h.d == 2
    assert g.degree == 4
    assert g.n_edges == 6 * 3


def test_hypergraph_rejects_wrong_arity():
    with pytest.raises(ValueError):
        Hypergraph(4, ((0, 1),), 3)


def test_bfs_on_path_and_disconnected():
    g = HostGraph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
    d = bfs_distances(g, [0])
    assert d[:3].tolist() == [0, 1, 2]
    assert np.isinf(d[3]) and np.isinf(d[4])
    assert not g.is_connected()
    assert set_distance(g, [0], [2]) == 2
    assert np.isinf(set_distance(g, [0], [4]))
    assert bfs_distances(g, [0], max_depth=1)[2] == np.inf


def test_from_edges_drops_duplicates_and_rejects_loops():
    g = HostGraph.from_edges(3, [(0, 1), (1, 0), (1, 2)])
    assert g.n_edges == 2
    with pytest.raises(ValueError):
        HostGraph.from_edges(3, [(1, 1)])
