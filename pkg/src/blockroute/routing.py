"""Two-phase block routing on the quotient graph and its physical serialization.

Quotient level: every block travels a canonical shortest path to a random
intermediate supervertex (scatter) and on to its destination (gather).
Congestion is the largest number of blocks crossing one directed support edge
within a single phase; dilation is the longest scatter + gather route. The
greedy scheduler turns the paths into per-step block moves.

Physical level: a single block hop assigns atoms to target vertices, routes
each atom along a shortest host path and splits the moves into rounds that
use every host edge at most once.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .blocks import BlockConfiguration, _grow
from .errors import HopInfeasibleError, QuotientDisconnectedError, RoutingError
from .graphs import SEED_MASK, HostGraph, bfs_distances
from .quotient import QuotientGraph, _hop_distances

Path = tuple[int, ...]


class ShortestPaths:
    """All-pairs hop distances on the quotient support with canonical paths.

    The path from a to b steps, at each vertex, to the smallest-id neighbor
    that is one hop closer to b.
    """

    def __init__(self, q: QuotientGraph):
        self.nbrs = q.neighbor_lists()
        self.dist = np.array([_hop_distances(self.nbrs, v) for v in range(q.n_blocks)])
        if np.any(self.dist < 0):
            raise QuotientDisconnectedError("quotient support is disconnected")

    def path(self, a: int, b: int) -> Path:
        to_b = self.dist[b]
        out = [a]
        v = a
        while v != b:
            v = next(u for u in self.nbrs[v] if to_b[u] == to_b[v] - 1)
            out.append(v)
        return tuple(out)


def _directed_loads(paths: Sequence[Path]) -> Counter:
    return Counter((p[k], p[k + 1]) for p in paths for k in range(len(p) - 1))


@dataclass(frozen=True)
class RoutingOutcome:
    permutation: tuple[int, ...]
    intermediate: tuple[int, ...]
    scatter_paths: tuple[Path, ...]
    gather_paths: tuple[Path, ...]
    d_c: int
    schedule: tuple[tuple[tuple[int, int, int], ...], ...] | None = None

    @property
    def n_blocks(self) -> int:
        return len(self.permutation)

    @property
    def scatter_loads(self) -> Counter:
        return _directed_loads(self.scatter_paths)

    @property
    def gather_loads(self) -> Counter:
        return _directed_loads(self.gather_paths)

    @property
    def edge_loads(self) -> Counter:
        """Undirected traversal counts over both phases."""
        loads = Counter()
        for (u, v), c in (self.scatter_loads + self.gather_loads).items():
            loads[(min(u, v), max(u, v))] += c
        return loads

    @property
    def congestion(self) -> int:
        """C_Q: most blocks crossing one directed edge within one phase."""
        return max([0, *self.scatter_loads.values(), *self.gather_loads.values()])

    @property
    def combined_congestion(self) -> int:
        return max([0, *self.edge_loads.values()])

    def route_length(self, i: int) -> int:
        return len(self.scatter_paths[i]) + len(self.gather_paths[i]) - 2

    @property
    def dilation(self) -> int:
        """D_Q: longest scatter + gather route of any block."""
        return max((self.route_length(i) for i in range(self.n_blocks)), default=0)

    @property
    def t_physical(self) -> int:
        return self.d_c * (self.congestion + self.dilation)

    @property
    def t_sched(self) -> int | None:
        return None if self.schedule is None else len(self.schedule)

    def full_route(self, i: int) -> Path:
        return self.scatter_paths[i] + self.gather_paths[i][1:]


def valiant_route(
    q: QuotientGraph,
    pi: Sequence[int],
    seed: int,
    d_c: int,
    *,
    sigma: Sequence[int] | None = None,
    paths: ShortestPaths | None = None,
) -> RoutingOutcome:
    """Route permutation ``pi`` through a uniformly random intermediate ``sigma``.

    ``sigma`` may be forced for testing; otherwise it is a Fisher-Yates
    shuffle drawn from ``seed``.
    """
    n = q.n_blocks
    pi = tuple(int(x) for x in pi)
    if sorted(pi) != list(range(n)):
        raise ValueError("pi must be a permutation of the block ids")
    if sigma is None:
        sigma = np.random.default_rng(seed & SEED_MASK).permutation(n)
    sigma = tuple(int(x) for x in sigma)
    if sorted(sigma) != list(range(n)):
        raise ValueError("sigma must be a permutation of the block ids")
    sp_ = paths if paths is not None else ShortestPaths(q)
    scatter = tuple(sp_.path(i, sigma[i]) for i in range(n))
    gather = tuple(sp_.path(sigma[i], pi[i]) for i in range(n))
    return RoutingOutcome(pi, sigma, scatter, gather, int(d_c))


def schedule_greedy(outcome: RoutingOutcome) -> RoutingOutcome:
    """Advance blocks hop by hop along their routes.

    In each step a support edge carries at most one block and no two blocks
    enter the same supervertex. Blocks with the most remaining hops move
    first (ties by id). Steps are tuples of (block, from, to).
    """
    routes = [outcome.full_route(i) for i in range(outcome.n_blocks)]
    progress = [0] * len(routes)
    steps = []
    while True:
        pending = [i for i, r in enumerate(routes) if progress[i] < len(r) - 1]
        if not pending:
            break
        pending.sort(key=lambda i: (progress[i] - len(routes[i]), i))
        used, entered, moves = set(), set(), []
        for i in pending:
            u, v = routes[i][progress[i]], routes[i][progress[i] + 1]
            e = (min(u, v), max(u, v))
            if e in used or v in entered:
                continue
            used.add(e)
            entered.add(v)
            moves.append((i, u, v))
            progress[i] += 1
        if not moves:
            raise RoutingError("scheduler livelock: no block could advance")
        steps.append(tuple(moves))
    return replace(outcome, schedule=tuple(steps))


def check_paths(q: QuotientGraph, outcome: RoutingOutcome, paths: ShortestPaths | None = None) -> None:
    """Raise RoutingError unless every route is a support shortest path."""
    sp_ = paths if paths is not None else ShortestPaths(q)
    for phase, plist in (("scatter", outcome.scatter_paths), ("gather", outcome.gather_paths)):
        for i, p in enumerate(plist):
            for a, b in zip(p, p[1:]):
                if not q.support[a, b]:
                    raise RoutingError(f"{phase} path of block {i} uses non-edge ({a}, {b})")
            if len(p) - 1 != sp_.dist[p[0], p[-1]]:
                raise RoutingError(f"{phase} path of block {i} is not shortest")
        ends = [p[-1] for p in plist]
        want = outcome.intermediate if phase == "scatter" else outcome.permutation
        if tuple(ends) != tuple(want):
            raise RoutingError(f"{phase} paths end at the wrong supervertices")
    for i in range(outcome.n_blocks):
        if outcome.scatter_paths[i][0] != i or outcome.gather_paths[i][0] != outcome.intermediate[i]:
            raise RoutingError(f"paths of block {i} start at the wrong supervertex")


def check_schedule(q: QuotientGraph, outcome: RoutingOutcome) -> None:
    """Raise RoutingError unless the schedule is valid and delivers every block."""
    if outcome.schedule is None:
        raise RoutingError("outcome has no schedule")
    pos = list(range(outcome.n_blocks))
    for t, step in enumerate(outcome.schedule):
        edges, movers, entered = set(), set(), set()
        for i, u, v in step:
            if i in movers:
                raise RoutingError(f"block {i} moves twice in step {t}")
            if pos[i] != u or not q.support[u, v]:
                raise RoutingError(f"illegal move of block {i} in step {t}")
            e = (min(u, v), max(u, v))
            if e in edges or v in entered:
                raise RoutingError(f"edge or vertex conflict in step {t}")
            movers.add(i)
            edges.add(e)
            entered.add(v)
            pos[i] = v
    if tuple(pos) != outcome.permutation:
        raise RoutingError("schedule does not deliver the permutation")
    if len(outcome.schedule) < max(outcome.congestion, outcome.dilation):
        raise RoutingError("schedule is shorter than max(C_Q, D_Q)")


# ---------------------------------------------------------------------------
# physical level


@dataclass(frozen=True)
class HopPlan:
    """Atom moves of one block hop; each path starts at the atom's source."""

    moves: tuple[Path, ...]
    matchings: tuple[tuple[tuple[int, int, int], ...], ...] | None = None

    @property
    def congestion(self) -> int:
        loads = Counter()
        for p in self.moves:
            for a, b in zip(p, p[1:]):
                loads[(min(a, b), max(a, b))] += 1
        return max(loads.values(), default=0)

    @property
    def dilation(self) -> int:
        return max((len(p) - 1 for p in self.moves), default=0)

    @property
    def rounds(self) -> int | None:
        return None if self.matchings is None else len(self.matchings)

    @property
    def targets(self) -> tuple[int, ...]:
        return tuple(p[-1] for p in self.moves)


def _host_path(g: HostGraph, dist_from_source: np.ndarray, target: int) -> Path:
    """Shortest path source -> target, walking back via smallest-id predecessors."""
    out = [int(target)]
    v = int(target)
    while dist_from_source[v] > 0:
        nb = g.neighbors(v)
        v = int(nb[np.argmax(dist_from_source[nb] == dist_from_source[v] - 1)])
        out.append(v)
    return tuple(reversed(out))


def plan_block_hop(
    g: HostGraph,
    cfg: BlockConfiguration,
    block: int,
    target_footprint: Sequence[int],
) -> HopPlan:
    """Assign atoms of ``block`` to ``target_footprint`` and route them.

    The assignment minimises total hop length; an atom may only be assigned
    a target within d_C + guard + 1 hops.
    """
    source = cfg.blocks[block]
    target = np.unique(np.asarray(list(target_footprint), dtype=np.int64))
    if target.size != cfg.s or len(target_footprint) != cfg.s:
        raise HopInfeasibleError(f"target footprint must have {cfg.s} distinct vertices")
    owner = cfg.footprint()
    if np.any((owner[target] >= 0) & (owner[target] != block)):
        raise HopInfeasibleError("target footprint overlaps another block")
    if cfg.guard > 1:
        near = bfs_distances(g, target, max_depth=cfg.guard - 1)
        hit = owner[np.isfinite(near)]
        if np.any((hit >= 0) & (hit != block)):
            raise HopInfeasibleError(f"target footprint violates guard {cfg.guard}")

    reach = int(round(np.sqrt(cfg.s))) + cfg.guard + 1
    dists = np.array([bfs_distances(g, [int(v)], max_depth=reach) for v in source])
    cost = dists[:, target]
    big = float(reach + 1) * cfg.s + 1.0
    rows, cols = linear_sum_assignment(np.where(np.isfinite(cost), cost, big))
    if not np.all(np.isfinite(cost[rows, cols])):
        raise HopInfeasibleError(f"some atom is more than {reach} hops from every admissible target")
    moves = tuple(_host_path(g, dists[r], int(target[c])) for r, c in zip(rows, cols))
    return HopPlan(moves)


def _konig_coloring(edges: list[tuple[int, int]]) -> list[int]:
    """Proper edge coloring of a bipartite multigraph with max-degree colors.

    ``edges`` are (left, right) pairs with independent namespaces. Conflicts
    are resolved by swapping the two colors along an alternating path.
    """
    deg = Counter()
    for l, r in edges:
        deg[("L", l)] += 1
        deg[("R", r)] += 1
    delta = max(deg.values(), default=0)
    at: dict[tuple, dict[int, int]] = {node: {} for node in deg}
    color = [-1] * len(edges)

    def free(node):
        used = at[node]
        return next(c for c in range(delta) if c not in used)

    for e, (l, r) in enumerate(edges):
        left, right = ("L", l), ("R", r)
        a, b = free(left), free(right)
        if a in at[right]:
            # walk the a/b alternating path out of `right`; it cannot reach `left`
            path, node, c = [], right, a
            while c in at[node]:
                f = at[node][c]
                path.append(f)
                fl, fr = ("L", edges[f][0]), ("R", edges[f][1])
                node = fl if node == fr else fr
                c = b if c == a else a
            for f in path:
                fl, fr = ("L", edges[f][0]), ("R", edges[f][1])
                del at[fl][color[f]], at[fr][color[f]]
            for f in path:
                fl, fr = ("L", edges[f][0]), ("R", edges[f][1])
                color[f] = b if color[f] == a else a
                at[fl][color[f]] = f
                at[fr][color[f]] = f
        color[e] = a
        at[left][a] = e
        at[right][a] = e
    return color


def decompose_hop_into_matchings(plan: HopPlan) -> HopPlan:
    """Split the atom moves into rounds.

    Single-edge moves between disjoint source and target sets form a bipartite
    multigraph and are edge-colored with exactly max-degree colors. Otherwise
    rounds are greedy: atoms with the most hops left advance first, and each
    host edge carries at most one atom per round. A round is a tuple of
    (atom index, from, to).
    """
    active = [k for k, p in enumerate(plan.moves) if len(p) > 1]
    sources = {plan.moves[k][0] for k in active}
    targets = {plan.moves[k][-1] for k in active}
    if active and all(len(plan.moves[k]) == 2 for k in active) and not sources & targets:
        colors = _konig_coloring([(plan.moves[k][0], plan.moves[k][1]) for k in active])
        rounds = [[] for _ in range(max(colors) + 1)]
        for k, c in zip(active, colors):
            rounds[c].append((k, plan.moves[k][0], plan.moves[k][1]))
        return replace(plan, matchings=tuple(tuple(r) for r in rounds))

    progress = {k: 0 for k in active}
    rounds = []
    while progress:
        order = sorted(progress, key=lambda k: (progress[k] - len(plan.moves[k]), k))
        used, step = set(), []
        for k in order:
            p = plan.moves[k]
            u, v = p[progress[k]], p[progress[k] + 1]
            e = (min(u, v), max(u, v))
            if e in used:
                continue
            used.add(e)
            step.append((k, u, v))
            progress[k] += 1
            if progress[k] == len(p) - 1:
                del progress[k]
        rounds.append(tuple(step))
    return replace(plan, matchings=tuple(rounds))


def check_matchings(plan: HopPlan) -> None:
    """Raise RoutingError unless the rounds replay every move edge-disjointly."""
    if plan.matchings is None:
        raise RoutingError("plan has no matchings")
    progress = [0] * len(plan.moves)
    for t, rnd in enumerate(plan.matchings):
        edges, movers = set(), set()
        for k, u, v in rnd:
            p = plan.moves[k]
            if k in movers or progress[k] >= len(p) - 1 or (p[progress[k]], p[progress[k] + 1]) != (u, v):
                raise RoutingError(f"round {t} moves atom {k} out of order")
            e = (min(u, v), max(u, v))
            if e in edges:
                raise RoutingError(f"round {t} uses host edge {e} twice")
            edges.add(e)
            movers.add(k)
            progress[k] += 1
    if any(progress[k] != len(p) - 1 for k, p in enumerate(plan.moves)):
        raise RoutingError("rounds do not complete every move")
    if len(plan.matchings) < max(plan.congestion, plan.dilation):
        raise RoutingError("fewer rounds than max(congestion, dilation)")


def sample_hop_target(g: HostGraph, cfg: BlockConfiguration, block: int, toward: int) -> np.ndarray:
    """A free, guard-respecting BFS ball for ``block`` next to block ``toward``.

    The ball is disjoint from every block including ``block`` itself and grows
    from the admissible vertex closest to ``block`` (then to ``toward``, then
    lowest id).
    """
    owner = cfg.footprint()
    others = np.flatnonzero((owner >= 0) & (owner != block))
    allowed = ~np.isfinite(bfs_distances(g, others, max_depth=max(cfg.guard, 1) - 1)) & (owner < 0)
    if not allowed.any():
        raise HopInfeasibleError("no admissible vertex for a target footprint")
    d_self = bfs_distances(g, cfg.blocks[block])
    d_next = bfs_distances(g, cfg.blocks[toward])
    cand = np.flatnonzero(allowed)
    order = np.lexsort((cand, d_next[cand], d_self[cand]))
    for root in cand[order][:50]:
        ball = _grow(g, int(root), allowed, cfg.s)
        if ball is not None:
            return np.sort(np.asarray(ball, dtype=np.int64))
    raise HopInfeasibleError("no admissible target footprint near the block")
