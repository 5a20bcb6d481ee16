"""Trial runner behind the CLI: simulate, sweep, regime, ft-budget, decompose."""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .blocks import place_blocks
from .errors import BudgetInfeasibleError, ConfigError
from .ft_budget import (
    FtParams,
    compose_syndrome_budget,
    k_max_report,
    operating_point_table,
    total_logical_error,
)
from .graphs import SEED_MASK, generate_regular
from .quotient import build_quotient, min_degree_for_regime, regime_check
from .routing import (
    ShortestPaths,
    check_matchings,
    check_paths,
    check_schedule,
    decompose_hop_into_matchings,
    plan_block_hop,
    sample_hop_target,
    schedule_greedy,
    valiant_route,
)
from .spectral import spectral_ratio

MODES = ("simulate", "sweep", "regime", "ft-budget", "decompose")
SCHEMA = "blockroute.trial/1"


@dataclass
class ExperimentConfig:
    mode: str = "simulate"
    n_vertices: int | None = None
    d_prime: int = 100
    r: int = 3
    d_c: int = 3
    n_l: int = 8
    guard: int = 1
    trials: int = 3
    base_seed: int = 0
    output_path: str | None = None
    output_format: str = "csv"
    parallelism: int | None = None
    d_prime_list: list[int] = field(default_factory=lambda: [50, 100, 200, 400])
    d_c_list: list[int] | None = None  # regime: 3,5,7,9; ft-budget: 5,7,9
    p_phys: float = 1e-4
    p_phys_rows: list[float] = field(default_factory=lambda: [5e-3, 1e-3, 1e-4, 1e-5])
    p_target: float = 1e-9
    c_circ: float = 10.0
    timing: bool = False

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        aliases = {"seed": "base_seed", "out": "output_path", "format": "output_format", "n": "n_vertices"}
        clean = {}
        for k, v in data.items():
            k = aliases.get(k.replace("-", "_"), k.replace("-", "_"))
            if k not in known:
                raise ConfigError(f"unknown config key {k!r}")
            clean[k] = v
        return cls(**clean)

    def validate(self) -> "ExperimentConfig":
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.output_format not in ("csv", "json"):
            raise ConfigError("output_format must be csv or json")
        if self.mode in ("simulate", "decompose", "sweep"):
            if self.d_c < 1 or self.n_l < 1 or self.guard < 0 or self.r < 2:
                raise ConfigError("need d_c >= 1, n_l >= 1, guard >= 0, r >= 2")
            dps = self.d_prime_list if self.mode == "sweep" else [self.d_prime]
            for dp in dps:
                n = self.host_size(dp)
                if dp < 1 or dp >= n or (n * dp) % 2:
                    raise ConfigError(f"no {dp}-regular graph on {n} vertices")
                if self.n_l * self.d_c**2 >= n:
                    raise ConfigError(f"{self.n_l} blocks of {self.d_c**2} do not fit on {n} vertices")
        if self.mode == "ft-budget":
            try:
                FtParams(self.p_phys, self.d_c, self.n_l, self.c_circ, p_target=self.p_target)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        return self

    def host_size(self, d_prime: int | None = None) -> int:
        """Explicit n_vertices, else max(2000, 2 N_L d_C^2) rounded up to even."""
        if self.n_vertices is not None:
            return int(self.n_vertices)
        n = max(2000, 2 * self.n_l * self.d_c**2)
        return n + (n % 2)


@dataclass
class TrialRecord:
    d_c: int
    n_l: int
    d_prime: int
    n_vertices: int
    seed: int
    beta_host: float
    beta_q: float
    d_q_avg: float
    diameter_q: int
    c_q: int
    d_q: int
    c_q_combined: int
    t_sched: int
    t_physical: int
    hop_rounds: int
    wall_time_ms: float


def _build(cfg: ExperimentConfig, seed: int):
    n = cfg.host_size(cfg.d_prime)
    g = generate_regular(n, cfg.d_prime, seed)
    host = spectral_ratio(g, cfg.d_prime, seed=seed)
    blocks = place_blocks(g, cfg.n_l, cfg.d_c, cfg.guard, seed)
    blocks.audit(g)
    q = build_quotient(g, blocks, seed=seed)
    q.audit()
    return g, host, blocks, q


def run_trial(cfg: ExperimentConfig, index: int) -> TrialRecord:
    start = time.perf_counter()
    seed = (cfg.base_seed + index) & SEED_MASK
    g, host, blocks, q = _build(cfg, seed)
    pi = np.random.default_rng([seed, 1]).permutation(cfg.n_l)
    paths = ShortestPaths(q)
    out = schedule_greedy(valiant_route(q, pi, seed, cfg.d_c, paths=paths))
    check_paths(q, out, paths)
    check_schedule(q, out)

    rounds = 0
    if out.schedule:
        block, _, toward = out.schedule[0][0]
        target = sample_hop_target(g, blocks, block, toward)
        plan = decompose_hop_into_matchings(plan_block_hop(g, blocks, block, target))
        check_matchings(plan)
        rounds = plan.rounds
    return TrialRecord(
        d_c=cfg.d_c,
        n_l=cfg.n_l,
        d_prime=cfg.d_prime,
        n_vertices=g.n_vertices,
        seed=seed,
        beta_host=host.beta,
        beta_q=q.beta if q.beta is not None else float("nan"),
        d_q_avg=q.avg_degree,
        diameter_q=q.diameter,
        c_q=out.congestion,
        d_q=out.dilation,
        c_q_combined=out.combined_congestion,
        t_sched=out.t_sched,
        t_physical=out.t_physical,
        hop_rounds=rounds,
        wall_time_ms=(time.perf_counter() - start) * 1e3,
    )


def _pool_size(cfg: ExperimentConfig) -> int:
    return cfg.parallelism if cfg.parallelism else (os.cpu_count() or 1)


def _map(fn, cfg_args: list, workers: int):
    if workers <= 1 or len(cfg_args) <= 1:
        return [fn(*a) for a in cfg_args]
    with ProcessPoolExecutor(max_workers=min(workers, len(cfg_args))) as pool:
        futures = [pool.submit(fn, *a) for a in cfg_args]
        return [f.result() for f in futures]


def aggregate(records: list[TrialRecord]) -> dict:
    first = records[0]
    mean = {k: float(np.mean([getattr(r, k) for r in records]))
            for k in ("beta_host", "beta_q", "d_q_avg", "diameter_q", "c_q", "d_q", "t_sched", "t_physical", "hop_rounds")}
    prediction = first.d_c * math.log2(first.n_l) if first.n_l > 1 else float("nan")
    return {
        "d_c": first.d_c,
        "n_l": first.n_l,
        "d_prime": first.d_prime,
        "trials": len(records),
        **{f"mean_{k}": v for k, v in mean.items()},
        "prediction": prediction,
        "alpha": mean["t_physical"] / prediction if first.n_l > 1 else float("nan"),
    }


def run_simulate(cfg: ExperimentConfig) -> tuple[list[TrialRecord], dict]:
    cfg.validate()
    records = _map(run_trial, [(cfg, i) for i in range(cfg.trials)], _pool_size(cfg))
    return records, aggregate(records)


def run_sweep(cfg: ExperimentConfig) -> list[dict]:
    cfg.validate()
    jobs = [(replace(cfg, d_prime=dp), i) for dp in cfg.d_prime_list for i in range(cfg.trials)]
    records = _map(run_trial, jobs, _pool_size(cfg))
    rows = []
    for dp in cfg.d_prime_list:
        recs = [r for r in records if r.d_prime == dp]
        agg = aggregate(recs)
        verdict = regime_check(dp, cfg.d_c, cfg.r, agg["mean_beta_host"])
        rows.append({
            "d_prime": dp,
            "beta_host": agg["mean_beta_host"],
            "threshold": verdict.loose_threshold,
            "in_regime": verdict.label,
            "t_physical": agg["mean_t_physical"],
            "beta_q": agg["mean_beta_q"],
        })
    return rows


def run_regime(d_c_list=None, r: int = 3) -> list[dict]:
    d_c_list = (3, 5, 7, 9) if d_c_list is None else d_c_list
    rows = []
    for d_c in d_c_list:
        tight = min_degree_for_regime(d_c, r, "tight")
        loose = min_degree_for_regime(d_c, r, "loose")
        rows.append({
            "d_c": d_c,
            "min_d": tight,
            "d_prime": tight * (r - 1),
            "min_d_loose": loose,
            "d_prime_loose": loose * (r - 1),
        })
    return rows


def run_ft_budget(cfg: ExperimentConfig) -> dict:
    cfg.validate()
    params = FtParams(cfg.p_phys, cfg.d_c, cfg.n_l, cfg.c_circ, p_target=cfg.p_target)
    budget = total_logical_error(params)
    table = operating_point_table(cfg.p_phys_rows, tuple(cfg.d_c_list or (5, 7, 9)), cfg.c_circ, params.p_th)
    kmax = k_max_report(cfg.d_c, params.p_eff, cfg.p_target)
    composed = {}
    for correlated in (False, True):
        key = "correlated" if correlated else "uncorrelated"
        try:
            composed[key] = compose_syndrome_budget(params, correlated, budget.k_max_exact)
        except BudgetInfeasibleError as exc:
            composed[key] = {"infeasible": str(exc)}
    notes = [n for row in table for n in row.notes] + kmax["notes"]
    return {
        "params": asdict(params) | {"p_eff": params.p_eff},
        "p_l": budget.p_l,
        "t_routing": budget.t_routing,
        "p_l_total": budget.p_l_total,
        "p_l_total_exact": budget.p_l_total_exact,
        "k_max": kmax,
        "operating_points": [asdict(r) for r in table],
        "composed_depth": composed,
        "notes": notes,
    }


def run_decompose(cfg: ExperimentConfig) -> list[dict]:
    """Plan and serialize ``trials`` block hops on one host, each toward a quotient neighbor."""
    cfg.validate()
    g, _, blocks, q = _build(cfg, cfg.base_seed & SEED_MASK)
    rng = np.random.default_rng([cfg.base_seed & SEED_MASK, 2])
    nbrs = q.neighbor_lists()
    rows = []
    for k in range(cfg.trials):
        block = int(rng.integers(q.n_blocks))
        toward = int(nbrs[block][int(rng.integers(len(nbrs[block])))])
        target = sample_hop_target(g, blocks, block, toward)
        plan = decompose_hop_into_matchings(plan_block_hop(g, blocks, block, target))
        check_matchings(plan)
        rows.append({
            "hop": k,
            "block": block,
            "toward": toward,
            "congestion": plan.congestion,
            "dilation": plan.dilation,
            "rounds": plan.rounds,
            "rounds_per_d_c": plan.rounds / cfg.d_c,
        })
    return rows
