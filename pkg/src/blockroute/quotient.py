"""Weighted quotient graph of a block configuration and regime arithmetic."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .blocks import BlockConfiguration
from .errors import QuotientDisconnectedError
from .graphs import HostGraph, bfs_distances
from .spectral import DEFAULT_TOL, SpectralSummary, alon_boppana_reference, spectral_ratio


@dataclass(frozen=True, eq=False)
class QuotientGraph:
    """One supervertex per block.

    ``weights[i, j]`` is the inter-block edge count divided by
    sqrt(|B_i| |B_j|). ``support`` marks block pairs at host set distance at
    most guard + 1; it is the graph routing runs on and contains every pair
    with positive weight.
    """

    weights: np.ndarray
    support: np.ndarray
    edge_counts: np.ndarray
    guard: int
    spectral: SpectralSummary | None
    diameter: int

    @property
    def n_blocks(self) -> int:
        return self.weights.shape[0]

    @property
    def avg_degree(self) -> float:
        return float(self.weights.sum(axis=1).mean())

    @property
    def beta(self) -> float | None:
        return None if self.spectral is None else self.spectral.beta

    def neighbor_lists(self) -> list[list[int]]:
        return [np.flatnonzero(row).tolist() for row in self.support]

    def support_edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.support, 1))
        return list(zip(i.tolist(), j.tolist()))

    def audit(self) -> None:
        w = self.weights
        if not np.array_equal(w, w.T) or np.any(np.diag(w) != 0) or np.any(w < 0):
            raise ValueError("weights must be symmetric, nonnegative with zero diagonal")
        if not np.array_equal(self.support, self.support.T) or self.support.diagonal().any():
            raise ValueError("support must be symmetric without loops")
        if np.any((w > 0) & ~self.support):
            raise ValueError("positive weight outside the support")


def _hop_distances(nbrs: list[list[int]], root: int) -> list[int]:
    dist = [-1] * len(nbrs)
    dist[root] = 0
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for u in nbrs[v]:
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def build_quotient(
    g: HostGraph,
    cfg: BlockConfiguration,
    *,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> QuotientGraph:
    n_blocks = cfg.n_blocks
    owner = cfg.footprint()
    edges = g.edge_array()
    bu, bv = owner[edges[:, 0]], owner[edges[:, 1]]
    cross = (bu >= 0) & (bv >= 0) & (bu != bv)
    counts = np.zeros((n_blocks, n_blocks))
    np.add.at(counts, (bu[cross], bv[cross]), 1)
    counts = counts + counts.T
    sizes = np.array([len(b) for b in cfg.blocks], dtype=float)
    weights = counts / np.sqrt(np.outer(sizes, sizes))

    reach = cfg.guard + 1
    support = counts > 0
    for i, b in enumerate(cfg.blocks):
        if reach > 1 and not support[i].all():
            near = bfs_distances(g, b, max_depth=reach)
            hit = np.unique(owner[np.isfinite(near)])
            support[i, hit[hit >= 0]] = True
    support = support | support.T
    np.fill_diagonal(support, False)

    nbrs = [np.flatnonzero(row).tolist() for row in support]
    diameter = 0
    for root in range(n_blocks):
        dist = _hop_distances(nbrs, root)
        if min(dist) < 0:
            raise QuotientDisconnectedError(
                f"quotient support is disconnected ({dist.count(-1)} blocks unreachable from block {root})"
            )
        diameter = max(diameter, max(dist))

    # beta_Q is undefined for one block or when no host edge joins two blocks
    spectral = None
    avg_degree = float(weights.sum(axis=1).mean())
    if n_blocks >= 2 and avg_degree > 0:
        spectral = spectral_ratio(weights, avg_degree, tol=tol, seed=seed)
    return QuotientGraph(weights, support, counts, cfg.guard, spectral, diameter)


def sweep_cut(q: QuotientGraph) -> np.ndarray:
    """Block set of the minimum-conductance prefix of the Fiedler ordering."""
    w = q.weights
    deg = w.sum(axis=1)
    inv = 1.0 / np.sqrt(np.where(deg > 0, deg, 1.0))
    lap = np.eye(len(w)) - inv[:, None] * w * inv[None, :]
    _, vecs = np.linalg.eigh(lap)
    order = np.argsort(vecs[:, 1] * inv, kind="stable")
    best, best_phi = None, np.inf
    total = deg.sum()
    for k in range(1, len(order)):
        s = order[:k]
        inside = np.zeros(len(w), dtype=bool)
        inside[s] = True
        cut = w[inside][:, ~inside].sum()
        vol = min(deg[inside].sum(), total - deg[inside].sum())
        phi = cut / vol if vol > 0 else np.inf
        if phi < best_phi:
            best, best_phi = s, phi
    return np.sort(best)


def lifted_conductance(g: HostGraph, cfg: BlockConfiguration, blocks: np.ndarray) -> float:
    """Host conductance |E(T, T^c)| / (min(|T|, |T^c|) d') of the union of ``blocks``."""
    inside = np.zeros(g.n_vertices, dtype=bool)
    for i in blocks:
        inside[cfg.blocks[i]] = True
    edges = g.edge_array()
    cut = int(np.count_nonzero(inside[edges[:, 0]] != inside[edges[:, 1]]))
    size = min(int(inside.sum()), g.n_vertices - int(inside.sum()))
    d = g.degree if g.degree is not None else g.degrees().mean()
    return cut / (size * d)


@dataclass(frozen=True)
class RegimeVerdict:
    d_prime: float
    loose_threshold: float
    tight_threshold: float
    in_loose: bool
    in_tight: bool
    label: str


def regime_check(d_prime: float, d_c: int, r: int, beta_host: float, marginal_fraction: float = 0.8) -> RegimeVerdict:
    """Compare d' with d_C^2 (r-1)/(1-beta) and the surface-code form d_C (r-1)/(1-beta).

    The label is "yes" inside the loose regime, "marginal" when d' reaches at
    least ``marginal_fraction`` of the loose threshold, and "no" otherwise.
    """
    if not 0 <= beta_host < 1:
        raise ValueError(f"beta_host must lie in [0, 1), got {beta_host}")
    loose = d_c * d_c * (r - 1) / (1 - beta_host)
    tight = d_c * (r - 1) / (1 - beta_host)
    in_loose = d_prime > loose
    if in_loose:
        label = "yes"
    elif d_prime >= marginal_fraction * loose:
        label = "marginal"
    else:
        label = "no"
    return RegimeVerdict(d_prime, loose, tight, in_loose, d_prime > tight, label)


def min_degree_for_regime(d_c: int, r: int, form: str = "tight") -> int:
    """Smallest base degree d whose Ramanujan host (d' = d(r-1)) is in regime."""
    if d_c < 1 or r < 2:
        raise ValueError("need d_c >= 1 and r >= 2")
    width = {"tight": d_c, "loose": d_c * d_c}[form]
    d = 1
    while True:
        dp = d * (r - 1)
        if dp >= 2:
            beta = alon_boppana_reference(dp)
            if beta < 1 and dp > width * (r - 1) / (1 - beta):
                return d
        d += 1


def diameter_bound(n_blocks: int, beta_q: float) -> int:
    """ceil(log N_L / log(1/beta_Q)) + 2, the expander diameter yardstick."""
    if n_blocks <= 1:
        return 2
    return math.ceil(math.log(n_blocks) / math.log(1 / beta_q)) + 2
