"""Extreme eigenvalues of symmetric adjacency operators via Lanczos.

One Lanczos run gives the top and bottom of the spectrum. The second
eigenvalue comes from a second run restricted to the orthogonal complement of
the Perron vector (the all-ones vector when row sums are constant, otherwise
the Ritz vector from the first run).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceError
from .graphs import HostGraph

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class SpectralSummary:
    lambda_max: float
    lambda_2: float
    lambda_min: float
    residual: float
    iterations: int
    reference_degree: float | None = None

    @property
    def lambda_star(self) -> float:
        return max(self.lambda_2, abs(self.lambda_min))

    @property
    def beta(self) -> float | None:
        if self.reference_degree is None:
            return None
        return self.lambda_star / self.reference_degree


def _operator(m):
    if isinstance(m, HostGraph):
        m = m.to_sparse()
    if sp.issparse(m):
        m = sp.csr_matrix(m, dtype=float)
        asym = abs(m - m.T)
        if asym.nnz and asym.max() > 1e-12 * max(1.0, abs(m).max()):
            raise ValueError("matrix is not symmetric")
        row_sums = np.asarray(m.sum(axis=1)).ravel()
        return m.shape[0], m.dot, row_sums
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0))):
        raise ValueError("matrix is not symmetric")
    return a.shape[0], a.dot, a.sum(axis=1)


def _lanczos(matvec, n, v0, tol, max_iter, want, deflate=None, check_every=8):
    """Lanczos with full reorthogonalisation.

    ``want`` is a subset of {"max", "min"}. Returns ({which: (theta, residual,
    ritz_vector)}, iterations). Raises ConvergenceError past ``max_iter``.
    """
    dim = n - (0 if deflate is None else 1)
    limit = min(max_iter, dim)

    def project(x):
        if deflate is not None:
            x = x - deflate * (deflate @ x)
        return x

    q = project(v0.astype(float))
    norm = np.linalg.norm(q)
    if norm == 0:
        raise ValueError("starting vector lies in the deflated subspace")
    q /= norm
    basis = np.empty((min(limit, 64), n))
    alphas, betas = [], []
    beta = 0.0
    k = 0
    scale = 1.0
    while True:
        if k == basis.shape[0]:
            basis = np.vstack([basis, np.empty((min(basis.shape[0], limit - k), n))])
        basis[k] = q
        w = matvec(q)
        alpha = float(q @ w)
        alphas.append(alpha)
        scale = max(scale, abs(alpha))
        w = w - alpha * q
        if k:
            w -= beta * basis[k - 1]
        active = basis[: k + 1]
        for _ in range(2):
            w -= active.T @ (active @ w)
            w = project(w)
        beta = float(np.linalg.norm(w))
        k += 1
        exhausted = beta <= 1e-12 * scale or k >= limit
        if exhausted or k % check_every == 0:
            theta, s = eigh_tridiagonal(np.array(alphas), np.array(betas)) if k > 1 else (
                np.array(alphas), np.ones((1, 1)))
            idx = {"max": int(np.argmax(theta)), "min": int(np.argmin(theta))}
            res = {w_: beta * abs(s[-1, idx[w_]]) for w_ in want}
            if exhausted or all(r <= tol for r in res.values()):
                out = {}
                for w_ in want:
                    vec = basis[:k].T @ s[:, idx[w_]]
                    out[w_] = (float(theta[idx[w_]]), 0.0 if beta <= 1e-12 * scale else res[w_], vec)
                worst = max(r for _, r, _ in out.values())
                if worst > tol:
                    raise ConvergenceError(
                        f"Lanczos did not converge in {k} iterations (residual {worst:.3g})", worst, k
                    )
                return out, k
        betas.append(beta)
        q = w / beta


def extreme_eigenvalues(m, tol: float = DEFAULT_TOL, max_iter: int | None = None, seed: int = 0) -> SpectralSummary:
    """Largest, second-largest and smallest eigenvalue of a symmetric matrix.

    ``m`` may be a dense array, a scipy sparse matrix or a HostGraph. Each
    value is accurate to ``tol`` (the reported residual bounds the error).
    """
    n, matvec, row_sums = _operator(m)
    if n < 2:
        raise ValueError("need at least two vertices")
    max_iter = 5 * n if max_iter is None else max_iter
    rng = np.random.default_rng(seed)
    first, it1 = _lanczos(matvec, n, rng.standard_normal(n), tol, max_iter, ("max", "min"))
    lam_max, r_max, ritz = first["max"]
    lam_min, r_min, _ = first["min"]

    if np.allclose(row_sums, row_sums[0]):
        perron = np.full(n, 1.0 / math.sqrt(n))
    else:
        perron = ritz / np.linalg.norm(ritz)
    second, it2 = _lanczos(matvec, n, rng.standard_normal(n), tol, max_iter, ("max",), deflate=perron)
    lam_2, r_2, _ = second["max"]
    # the deflated run only sees n - 1 directions; lambda_2 >= lambda_min always
    lam_2 = max(lam_2, lam_min)
    return SpectralSummary(lam_max, lam_2, lam_min, max(r_max, r_min, r_2), it1 + it2)


def spectral_ratio(m, reference_degree: float, **kwargs) -> SpectralSummary:
    """``extreme_eigenvalues`` plus beta = lambda_star / reference_degree."""
    if not reference_degree > 0:
        raise ValueError("reference_degree must be positive")
    return replace(extreme_eigenvalues(m, **kwargs), reference_degree=float(reference_degree))


def alon_boppana_reference(d_prime: float) -> float:
    """Ramanujan spectral ratio 2 sqrt(d' - 1) / d'."""
    if d_prime < 2:
        raise ValueError("d_prime must be at least 2")
    return 2.0 * math.sqrt(d_prime - 1) / d_prime
