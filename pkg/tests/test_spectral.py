import numpy as np
import pytest
import scipy.sparse as sp

from blockroute import ConvergenceError, HostGraph, alon_boppana_reference, extreme_eigenvalues, generate_regular, spectral_ratio


def dense_oracle(a):
    w = np.linalg.eigvalsh(np.asarray(a, dtype=float))
    return w[-1], w[-2], w[0]


def test_k4_spectrum():
    k4 = np.ones((4, 4)) - np.eye(4)
    s = extreme_eigenvalues(k4)
    assert s.lambda_max == pytest.approx(3, abs=1e-8)
    assert s.lambda_2 == pytest.approx(-1, abs=1e-8)
    assert s.lambda_min == pytest.approx(-1, abs=1e-8)


def test_four_cycle_is_bipartite():
    g = HostGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    s = spectral_ratio(g, 2)
    assert (s.lambda_max, s.lambda_2, s.lambda_min) == pytest.approx((2, 0, -2), abs=1e-8)
    assert s.beta == pytest.approx(1.0)


@pytest.mark.parametrize("form", ["host", "sparse", "dense"])
def test_input_forms_agree(form):
    g = generate_regular(120, 6, seed=4)
    m = {"host": g, "sparse": g.to_sparse(), "dense": g.to_dense()}[form]
    s = extreme_eigenvalues(m)
    ref = dense_oracle(g.to_dense())
    assert (s.lambda_max, s.lambda_2, s.lambda_min) == pytest.approx(ref, abs=1e-6)


def test_weighted_irregular_matrix():
    rng = np.random.default_rng(0)
    a = rng.random((60, 60))
    a = np.triu(a, 1)
    a = a + a.T
    s = extreme_eigenvalues(sp.csr_matrix(a))
    assert (s.lambda_max, s.lambda_2, s.lambda_min) == pytest.approx(dense_oracle(a), abs=1e-6)


def test_nonsymmetric_is_rejected():
    with pytest.raises(ValueError):
        extreme_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_iteration_cap_raises_convergence_error():
    g = generate_regular(400, 10, seed=1)
    with pytest.raises(ConvergenceError) as info:
        extreme_eigenvalues(g, tol=1e-14, max_iter=3)
    assert info.value.exit_code == 4


def test_alon_boppana_values():
    assert alon_boppana_reference(2) == pytest.approx(1.0)
    assert alon_boppana_reference(50) == pytest.approx(0.28, abs=5e-4)
    assert alon_boppana_reference(100) == pytest.approx(0.199, abs=5e-4)


def test_beta_of_regular_host_near_ramanujan_value():
    g = generate_regular(2000, 100, seed=7)
    s = spectral_ratio(g, 100)
    assert abs(s.beta - 0.199) < 0.03
    assert s.residual < 1e-6
