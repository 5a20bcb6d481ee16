"""Guarded block placement and the deformation energy of a placed template."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import PlacementError
from .graphs import SEED_MASK, HostGraph, bfs_distances


@dataclass(frozen=True, eq=False)
class BlockConfiguration:
    blocks: tuple[np.ndarray, ...]
    s: int
    guard: int
    n_vertices: int

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def occupancy(self) -> float:
        return self.n_blocks * self.s / self.n_vertices

    def footprint(self) -> np.ndarray:
        """Block id per host vertex, -1 for unoccupied vertices."""
        owner = np.full(self.n_vertices, -1, dtype=np.int64)
        for i, b in enumerate(self.blocks):
            owner[b] = i
        return owner

    def audit(self, g: HostGraph) -> None:
        """Raise ValueError unless every configuration invariant holds."""
        if self.occupancy > 1:
            raise ValueError(f"occupancy {self.occupancy:.3f} exceeds 1")
        seen = np.zeros(self.n_vertices, dtype=bool)
        for i, b in enumerate(self.blocks):
            if len(b) != self.s or len(np.unique(b)) != self.s:
                raise ValueError(f"block {i} does not have {self.s} distinct vertices")
            if seen[b].any():
                raise ValueError(f"block {i} overlaps an earlier block")
            seen[b] = True
            if not _induced_connected(g, b):
                raise ValueError(f"block {i} does not induce a connected subgraph")
        if self.guard > 1:
            owner = self.footprint()
            for i, b in enumerate(self.blocks):
                near = bfs_distances(g, b, max_depth=self.guard - 1)
                hit = owner[np.isfinite(near)]
                if np.any((hit >= 0) & (hit != i)):
                    raise ValueError(f"block {i} is closer than guard {self.guard} to another block")


def _induced_connected(g: HostGraph, verts: Sequence[int]) -> bool:
    members = set(int(v) for v in verts)
    start = next(iter(members))
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for u in g.neighbors(v):
            u = int(u)
            if u in members and u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == len(members)


def _grow(g: HostGraph, root: int, allowed: np.ndarray, size: int) -> list[int] | None:
    """BFS ball of exactly ``size`` allowed vertices around ``root``."""
    taken = [root]
    mark = {root}
    queue = deque([root])
    while queue and len(taken) < size:
        v = queue.popleft()
        for u in g.neighbors(v):
            u = int(u)
            if allowed[u] and u not in mark:
                mark.add(u)
                taken.append(u)
                queue.append(u)
                if len(taken) == size:
                    break
    return taken if len(taken) == size else None


def place_blocks(
    g: HostGraph,
    n_blocks: int,
    d_c: int,
    guard: int,
    seed: int,
    *,
    seed_tries: int = 50,
    restarts: int = 10,
    max_occupancy: float = 0.95,
) -> BlockConfiguration:
    """Place ``n_blocks`` disjoint BFS balls of ``d_c**2`` vertices.

    Each block grows from a uniformly random vertex that is at least ``guard``
    hops from every block placed so far, using only such vertices, so the
    pairwise set distance is at least ``guard``.
    """
    s = d_c * d_c
    if guard < 0 or n_blocks < 1 or d_c < 1:
        raise ValueError("need n_blocks >= 1, d_c >= 1 and guard >= 0")
    if n_blocks * s > g.n_vertices:
        raise PlacementError(f"{n_blocks} blocks of {s} vertices exceed {g.n_vertices} host vertices")
    occupancy = n_blocks * s / g.n_vertices
    if occupancy >= min(1.0, max_occupancy) and not (n_blocks == 1 and occupancy == 1.0):
        raise PlacementError(f"occupancy {occupancy:.3f} exceeds packing cap {max_occupancy}")

    rng = np.random.default_rng(seed & SEED_MASK)
    for _restart in range(restarts):
        dist = np.full(g.n_vertices, np.inf)
        blocks: list[np.ndarray] = []
        for _ in range(n_blocks):
            allowed = dist >= max(guard, 1)
            block = None
            for _try in range(seed_tries):
                candidates = np.flatnonzero(allowed)
                if candidates.size == 0:
                    break
                block = _grow(g, int(rng.choice(candidates)), allowed, s)
                if block is not None:
                    break
            if block is None:
                break
            arr = np.sort(np.asarray(block, dtype=np.int64))
            blocks.append(arr)
            if guard > 1:
                dist = np.minimum(dist, bfs_distances(g, arr, max_depth=guard - 1))
            else:
                dist[arr] = 0
        if len(blocks) == n_blocks:
            return BlockConfiguration(tuple(blocks), s, guard, g.n_vertices)
    raise PlacementError(
        f"could not place {n_blocks} blocks of size {s} with guard {guard} after {restarts} restarts"
    )


@dataclass(frozen=True)
class BlockTemplate:
    """Rigid template edges and the current host position of each template vertex."""

    edges: tuple[tuple[int, int], ...]
    positions: Mapping[int, int]

    def __post_init__(self):
        if len(set(self.positions.values())) != len(self.positions):
            raise ValueError("template positions must be injective")


def deformation_energy(g: HostGraph, t: BlockTemplate) -> int:
    """Sum over template edges of host distance between the endpoints, minus |E|.

    Zero exactly when every template edge sits on a host edge.
    """
    total = 0
    cache: dict[int, np.ndarray] = {}
    for u, v in t.edges:
        try:
            xu, xv = t.positions[u], t.positions[v]
        except KeyError as exc:
            raise ValueError(f"template vertex {exc.args[0]} has no position") from None
        if xu not in cache:
            cache[xu] = bfs_distances(g, [xu])
        d = cache[xu][xv]
        if not np.isfinite(d):
            raise ValueError(f"positions {xu} and {xv} are disconnected")
        total += int(d)
    return total - len(t.edges)
