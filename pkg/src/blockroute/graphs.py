"""Host graphs: random regular generation, clique expansion, BFS distances."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import GenerationError

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class HostGraph:
    """Simple undirected graph in CSR form with sorted neighbor lists.

    ``degree`` is set only when every vertex has the same number of
    neighbors. Instances are treated as immutable.
    """

    n_vertices: int
    indptr: np.ndarray
    indices: np.ndarray
    degree: int | None = None
    seed: int | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], seed: int | None = None) -> "HostGraph":
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise ValueError("self-loops are not allowed")
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        keys = np.unique(lo * n + hi)
        return cls._from_keys(n, keys, seed)

    @classmethod
    def _from_keys(cls, n: int, keys: np.ndarray, seed: int | None) -> "HostGraph":
        u, v = np.divmod(np.asarray(keys, dtype=np.int64), n)
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        counts = np.bincount(rows, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        degree = int(counts[0]) if n and np.all(counts == counts[0]) else None
        return cls(n, indptr, cols.astype(np.int64), degree, seed)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def n_edges(self) -> int:
        return int(self.indices.size // 2)

    def edge_array(self) -> np.ndarray:
        """Each undirected edge once, as rows (u, v) with u < v."""
        rows = np.repeat(np.arange(self.n_vertices), self.degrees())
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    def to_sparse(self) -> sp.csr_matrix:
        data = np.ones(self.indices.size, dtype=float)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n_vertices,) * 2)

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def is_connected(self) -> bool:
        if self.n_vertices == 0:
            return True
        return bool(np.all(np.isfinite(bfs_distances(self, [0]))))

    def audit(self) -> None:
        """Raise ``ValueError`` if the graph is not simple and symmetric."""
        n = self.n_vertices
        rows = np.repeat(np.arange(n), self.degrees())
        if np.any(rows == self.indices):
            raise ValueError("self-loop present")
        for v in range(n):
            nb = self.neighbors(v)
            if nb.size > 1 and np.any(np.diff(nb) <= 0):
                raise ValueError(f"neighbor list of {v} not strictly sorted")
        fwd = np.sort(rows * n + self.indices)
        bwd = np.sort(self.indices * n + rows)
        if not np.array_equal(fwd, bwd):
            raise ValueError("adjacency is not symmetric")
        if self.degree is not None and np.any(self.degrees() != self.degree):
            raise ValueError("degree field does not match adjacency")


@dataclass(frozen=True)
class Hypergraph:
    n_vertices: int
    hyperedges: tuple[tuple[int, ...], ...]
    r: int
    vertex_degrees: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        hedges = tuple(tuple(sorted(int(x) for x in e)) for e in self.hyperedges)
        object.__setattr__(self, "hyperedges", hedges)
        for e in hedges:
            if len(e) != self.r or len(set(e)) != self.r:
                raise ValueError(f"hyperedge {e} does not have {self.r} distinct vertices")
            if e[0] < 0 or e[-1] >= self.n_vertices:
                raise ValueError(f"hyperedge {e} out of range")
        counts = Counter(v for e in hedges for v in e)
        object.__setattr__(
            self, "vertex_degrees", tuple(counts.get(v, 0) for v in range(self.n_vertices))
        )

    @property
    def d(self) -> int | None:
        degs = set(self.vertex_degrees)
        return degs.pop() if len(degs) == 1 else None


def clique_expansion(h: Hypergraph) -> HostGraph:
    """Replace every hyperedge by a clique on its vertices.

    The degree field is only trusted (set to ``d * (r - 1)``) when ``h`` is
    regular and no two hyperedges share a pair, so no edge was merged.
    """
    pairs = Counter(p for e in h.hyperedges for p in combinations(e, 2))
    g = HostGraph.from_edges(h.n_vertices, pairs.keys())
    merged = any(c > 1 for c in pairs.values())
    degree = None
    if h.d is not None and not merged and g.degree is not None:
        degree = h.d * (h.r - 1)
        assert degree == g.degree
    return HostGraph(g.n_vertices, g.indptr, g.indices, degree, None)


def generate_regular(
    n: int,
    d_prime: int,
    seed: int,
    max_attempts: int = 100,
    rewire_passes: int = 50,
) -> HostGraph:
    """Random simple connected ``d_prime``-regular graph on ``n`` vertices.

    Stubs are paired uniformly; self-loops and duplicate edges are dropped and
    the freed stubs are re-paired, falling back to a random edge swap when a
    pair is still invalid. An attempt that cannot restore exact regularity in
    ``rewire_passes`` passes, or that comes out disconnected, is retried with
    ``seed + 1``.
    """
    if n <= 0 or d_prime < 0:
        raise ValueError("n must be positive and d_prime non-negative")
    if (n * d_prime) % 2:
        raise ValueError(f"n * d_prime must be even (got {n} * {d_prime})")
    if d_prime >= n:
        raise ValueError(f"d_prime must be < n (got {d_prime} >= {n})")

    diagnostics: dict = {}
    for attempt in range(max_attempts):
        s = (seed + attempt) & SEED_MASK
        rng = np.random.default_rng(s)
        keys, leftover = _configuration_attempt(n, d_prime, rng, rewire_passes)
        if keys is None:
            diagnostics = {"attempt": attempt, "seed": s, "reason": "irregular", "unpaired_stubs": leftover}
            continue
        g = HostGraph._from_keys(n, keys, s)
        if d_prime > 0 and not g.is_connected():
            diagnostics = {"attempt": attempt, "seed": s, "reason": "disconnected"}
            continue
        if g.degree is None and d_prime == 0:
            g = HostGraph(n, g.indptr, g.indices, 0, s)
        return g
    raise GenerationError(
        f"no connected {d_prime}-regular graph on {n} vertices after {max_attempts} attempts",
        diagnostics,
    )


def _configuration_attempt(n, d, rng, passes):
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    rng.shuffle(stubs)
    pairs = stubs.reshape(-1, 2)
    lo = pairs.min(axis=1)
    hi = pairs.max(axis=1)
    ok = lo != hi
    keys = lo[ok] * n + hi[ok]
    keys, first = np.unique(keys, return_index=True)
    # stubs freed by dropped loops and duplicates
    kept_deg = np.bincount(np.concatenate(np.divmod(keys, n)), minlength=n)
    deficit = d - kept_deg
    if not deficit.any():
        return keys, 0

    edge_list = keys.tolist()
    present = set(edge_list)
    position = {k: i for i, k in enumerate(edge_list)}

    def add(k):
        position[k] = len(edge_list)
        edge_list.append(k)
        present.add(k)

    def remove(k):
        i = position.pop(k)
        last = edge_list.pop()
        if last != k:
            edge_list[i] = last
            position[last] = i
        present.discard(k)

    def key(a, b):
        return a * n + b if a < b else b * n + a

    free = np.repeat(np.arange(n), deficit).tolist()
    for _ in range(passes):
        if not free:
            break
        rng.shuffle(free)
        retry = []
        for i in range(0, len(free) - 1, 2):
            a, b = free[i], free[i + 1]
            if a != b and key(a, b) not in present:
                add(key(a, b))
                continue
            for _try in range(20):
                e = edge_list[int(rng.integers(len(edge_list)))]
                x, y = divmod(e, n)
                if rng.random() < 0.5:
                    x, y = y, x
                if x in (a, b) or y in (a, b):
                    continue
                if key(a, x) in present or key(b, y) in present:
                    continue
                remove(e)
                add(key(a, x))
                add(key(b, y))
                break
            else:
                retry.extend((a, b))
        if len(free) % 2:
            retry.append(free[-1])
        free = retry
    if free:
        return None, len(free)
    return np.sort(np.asarray(edge_list, dtype=np.int64)), 0


def _gather_neighbors(g: HostGraph, frontier: np.ndarray) -> np.ndarray:
    starts = g.indptr[frontier]
    counts = g.indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    offsets = np.repeat(starts - (np.cumsum(counts) - counts), counts)
    return g.indices[offsets + np.arange(total)]


def bfs_distances(g: HostGraph, sources: Iterable[int], max_depth: int | None = None) -> np.ndarray:
    """Multi-source hop distances; unreachable vertices get ``inf``.

    With ``max_depth`` the search stops early and vertices further away are
    also reported as ``inf``.
    """
    src = np.unique(np.fromiter(sources, dtype=np.int64))
    if src.size == 0:
        raise ValueError("sources must be nonempty")
    dist = np.full(g.n_vertices, -1, dtype=np.int64)
    dist[src] = 0
    frontier = src
    level = 0
    while frontier.size and (max_depth is None or level < max_depth):
        level += 1
        nb = _gather_neighbors(g, frontier)
        nb = np.unique(nb[dist[nb] < 0])
        dist[nb] = level
        frontier = nb
    out = dist.astype(float)
    out[dist < 0] = np.inf
    return out


def set_distance(g: HostGraph, a: Sequence[int], b: Sequence[int]) -> float:
    """min over u in a, v in b of dist(u, v); ``inf`` if disconnected."""
    b = np.asarray(list(b), dtype=np.int64)
    if b.size == 0:
        raise ValueError("both vertex sets must be nonempty")
    return float(bfs_distances(g, a)[b].min())
