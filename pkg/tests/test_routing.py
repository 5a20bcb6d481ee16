import itertools
from dataclasses import replace

import numpy as np
import pytest

from blockroute import (
    HopPlan,
    RoutingError,
    ShortestPaths,
    check_matchings,
    check_paths,
    check_schedule,
    decompose_hop_into_matchings,
    plan_block_hop,
    schedule_greedy,
    valiant_route,
)
from blockroute.routing import sample_hop_target


def min_edge_colors(edges):
    """Brute-force chromatic index by backtracking over color counts."""
    if not edges:
        return 0
    for k in itertools.count(1):
        colors = [-1] * len(edges)

        def fits(e, c):
            l, r = edges[e]
            return all(colors[f] != c or (edges[f][0] != l and edges[f][1] != r) for f in range(e))

        def solve(e, used):
            if e == len(edges):
                return True
            for c in range(min(k, used + 1)):
                if fits(e, c):
                    colors[e] = c
                    if solve(e + 1, max(used, c + 1)):
                        return True
            colors[e] = -1
            return False

        if solve(0, 0):
            return k


def test_identity_permutation_still_routes_through_intermediate(small_instance):
    _, _, q = small_instance
    out = schedule_greedy(valiant_route(q, range(q.n_blocks), seed=3, d_c=3))
    check_paths(q, out)
    check_schedule(q, out)
    assert all(out.scatter_paths[i][-1] == out.gather_paths[i][0] for i in range(q.n_blocks))


def test_forced_identity_sigma_gives_zero_scatter(small_instance):
    _, _, q = small_instance
    n = q.n_blocks
    pi = list(range(1, n)) + [0]
    out = valiant_route(q, pi, seed=0, d_c=3, sigma=range(n))
    assert not out.scatter_loads
    assert out.dilation == max(len(p) - 1 for p in out.gather_paths)


def test_metrics_and_physical_time(small_instance):
    _, _, q = small_instance
    pi = np.random.default_rng(0).permutation(q.n_blocks)
    out = schedule_greedy(valiant_route(q, pi, seed=1, d_c=3))
    check_schedule(q, out)
    assert out.t_physical == 3 * (out.congestion + out.dilation)
    assert out.combined_congestion >= out.congestion
    assert out.t_sched >= max(out.congestion, out.dilation)


def test_canonical_paths_are_shortest(small_instance):
    _, _, q = small_instance
    sp = ShortestPaths(q)
    for a in range(q.n_blocks):
        for b in range(q.n_blocks):
            p = sp.path(a, b)
            assert p[0] == a and p[-1] == b and len(p) - 1 == sp.dist[a, b]
            assert all(q.support[x, y] for x, y in zip(p, p[1:]))


def test_bad_permutation_is_rejected(small_instance):
    _, _, q = small_instance
    with pytest.raises(ValueError):
        valiant_route(q, [0] * q.n_blocks, seed=0, d_c=3)


def test_check_schedule_detects_tampering(small_instance):
    _, _, q = small_instance
    pi = np.random.default_rng(2).permutation(q.n_blocks)
    out = schedule_greedy(valiant_route(q, pi, seed=2, d_c=3))
    with pytest.raises(RoutingError):
        check_schedule(q, replace(out, schedule=out.schedule[:-1]))


def test_konig_on_two_by_two_complete_bipartite():
    plan = HopPlan(((0, 10), (0, 11), (1, 10), (1, 11)))
    out = decompose_hop_into_matchings(plan)
    check_matchings(out)
    assert out.rounds == 2


@pytest.mark.parametrize("seed", range(20))
def test_konig_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 11))
    edges = [(int(rng.integers(4)), 100 + int(rng.integers(4))) for _ in range(m)]
    out = decompose_hop_into_matchings(HopPlan(tuple(edges)))
    check_matchings(out)
    assert out.rounds == min_edge_colors(edges)


def test_multi_hop_moves_use_greedy_rounds():
    plan = HopPlan(((0, 1, 2), (1, 2, 3), (5, 6)))
    out = decompose_hop_into_matchings(plan)
    check_matchings(out)
    assert out.rounds >= out.dilation


def test_block_hop_on_host(small_instance):
    g, cfg, q = small_instance
    toward = q.neighbor_lists()[0][0]
    target = sample_hop_target(g, cfg, 0, toward)
    plan = decompose_hop_into_matchings(plan_block_hop(g, cfg, 0, target))
    check_matchings(plan)
    assert sorted(plan.targets) == sorted(int(v) for v in target)
    assert plan.rounds <= 3 * 3
