import math

import numpy as np
import pytest

from blockroute import (
    HostGraph,
    QuotientDisconnectedError,
    build_quotient,
    generate_regular,
    lifted_conductance,
    min_degree_for_regime,
    place_blocks,
    regime_check,
    set_distance,
    sweep_cut,
)
from blockroute.blocks import BlockConfiguration
from blockroute.quotient import diameter_bound


def brute_weights(g, cfg):
    n = cfg.n_blocks
    w = np.zeros((n, n))
    a = g.to_dense()
    for i in range(n):
        for j in range(n):
            if i != j:
                c = a[np.ix_(cfg.blocks[i], cfg.blocks[j])].sum()
                w[i, j] = c / math.sqrt(len(cfg.blocks[i]) * len(cfg.blocks[j]))
    return w


def test_weights_and_support_match_brute_force(small_instance):
    g, cfg, q = small_instance
    q.audit()
    assert np.allclose(q.weights, brute_weights(g, cfg))
    for i in range(cfg.n_blocks):
        for j in range(cfg.n_blocks):
            if i != j:
                near = set_distance(g, cfg.blocks[i], cfg.blocks[j]) <= cfg.guard + 1
                assert q.support[i, j] == near


def test_beta_q_below_one(small_instance):
    _, _, q = small_instance
    assert 0 <= q.beta < 1
    assert q.diameter >= 1


def test_d_c_3_row_beta_q():
    vals = []
    for seed in range(3):
        g = generate_regular(2000, 100, seed)
        cfg = place_blocks(g, 64, 3, 1, seed)
        vals.append(build_quotient(g, cfg, seed=seed).beta)
    assert abs(np.mean(vals) - 0.178) < 0.05


def test_disconnected_quotient_raises():
    g = HostGraph.from_edges(8, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)])
    cfg = BlockConfiguration((np.array([0, 1]), np.array([4, 5])), 2, 1, 8)
    with pytest.raises(QuotientDisconnectedError) as info:
        build_quotient(g, cfg)
    assert info.value.exit_code == 4


def test_sweep_cut_lifts_to_host_cut(small_instance):
    g, cfg, q = small_instance
    s = sweep_cut(q)
    assert 0 < len(s) < q.n_blocks
    phi = lifted_conductance(g, cfg, s)
    assert 0 < phi <= 1


@pytest.mark.parametrize(
    "d_prime,beta,threshold,label",
    [(50, 0.280, 136.1, "no"), (100, 0.199, 122.4, "marginal"), (200, 0.140, 113.9, "yes"), (400, 0.098, 108.7, "yes")],
)
def test_regime_thresholds_and_labels(d_prime, beta, threshold, label):
    v = regime_check(d_prime, 7, 3, beta)
    assert v.loose_threshold == pytest.approx(98 / (1 - beta), rel=1e-12)
    assert v.tight_threshold == pytest.approx(14 / (1 - beta), rel=1e-12)
    assert v.label == label
    # the listed beta is rounded to 3 decimals; the listed threshold must be reachable from that interval
    lo = regime_check(d_prime, 7, 3, beta - 5e-4).loose_threshold
    hi = regime_check(d_prime, 7, 3, beta + 5e-4).loose_threshold
    assert lo - 0.05 <= threshold <= hi + 0.05


def test_min_degree_scan_matches_direct_search():
    for d_c in (2, 3, 4, 5, 7, 9):
        d = min_degree_for_regime(d_c, 3)
        for cand in range(1, d + 1):
            dp = 2 * cand
            beta = 2 * math.sqrt(dp - 1) / dp if dp >= 2 else 1.0
            ok = beta < 1 and dp > 2 * d_c / (1 - beta)
            assert ok == (cand == d)
    assert min_degree_for_regime(5, 3, "loose") == 34


def test_diameter_bound_is_logarithmic():
    assert diameter_bound(1, 0.5) == 2
    assert diameter_bound(64, 0.5) == 8
