"""Fault-tolerance budget for routing surface-code patches.

Conventions: p_eff = C_circ * p_phys, t = floor((d_C - 1)/2) correctable
errors per patch, per-round logical error (p_eff/p_th)^((d_C+1)/2) with unit
prefactor, and a routing depth of d_C * ceil(log2 N_L) rounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import BudgetInfeasibleError

K_CAP = 10**6

# Reference operating points checked for discrepancy notes: p_phys -> {d_C: log10 p_L}.
REFERENCE_LOG10_PL = {
    1e-4: {5: -3, 7: -4, 9: -5},
    1e-5: {5: -9, 7: -12},
}
# (d_C, p_eff, p_target) -> quoted stop-and-correct interval.
REFERENCE_K_MAX = {
    (5, 1e-3, 1e-9): 24,
    (7, 1e-3, 1e-9): 23,
    (7, 1e-3, 1e-3): 60,
}


@dataclass(frozen=True)
class FtParams:
    p_phys: float
    d_c: int
    n_l: int = 100
    c_circ: float = 10.0
    p_th: float = 1e-2
    p_target: float = 1e-9
    # carried for completeness; no formula consumes them
    p_loss: float = 1e-4
    transport_fidelity: float = 0.99

    def __post_init__(self):
        for name in ("p_phys", "p_th", "p_loss"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if not 0 < self.p_target <= 1:
            raise ValueError(f"p_target must lie in (0, 1], got {self.p_target}")
        if not 5 <= self.c_circ <= 15:
            raise ValueError(f"c_circ must lie in [5, 15], got {self.c_circ}")
        if not 0 < self.p_eff < 1:
            raise ValueError(f"p_eff = {self.p_eff} is not a probability")
        if self.d_c < 1 or self.n_l < 1:
            raise ValueError("d_c and n_l must be positive")

    @classmethod
    def from_p_eff(cls, p_eff: float, d_c: int, c_circ: float = 10.0, **kw) -> "FtParams":
        return cls(p_phys=p_eff / c_circ, d_c=d_c, c_circ=c_circ, **kw)

    @property
    def p_eff(self) -> float:
        return self.c_circ * self.p_phys

    @property
    def t(self) -> int:
        return (self.d_c - 1) // 2


def _floor(x: float) -> int:
    # absorb representation error such as 2 / (25 * 1e-3) = 79.999...
    return math.floor(x + 1e-9 * max(1.0, abs(x)))


def k_max_chernoff(params: FtParams) -> int:
    """floor((t - sqrt(2 t ln(1/p_target))) / (d_C^2 p_eff)), clamped at 0."""
    t = params.t
    numerator = t - math.sqrt(2 * t * math.log(1 / params.p_target))
    if numerator <= 0:
        return 0
    return _floor(numerator / (params.d_c**2 * params.p_eff))


def _log_pmf(n: int, p: float, k: int) -> float:
    return (
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
        + k * math.log(p) + (n - k) * math.log1p(-p)
    )


def binomial_upper_tail(n: int, p: float, t: int) -> float:
    """P(X > t) for X ~ Binomial(n, p), accurate for tiny tails."""
    if t >= n:
        return 0.0
    if t < 0:
        return 1.0
    if t + 1 > n * p:
        # terms decrease from k = t + 1 on
        terms = []
        for k in range(t + 1, n + 1):
            term = math.exp(_log_pmf(n, p, k))
            terms.append(term)
            if term < 1e-18 * terms[0] or term == 0.0:
                break
        return min(1.0, math.fsum(terms))
    lower = math.fsum(math.exp(_log_pmf(n, p, k)) for k in range(t + 1))
    return max(0.0, 1.0 - lower)


@dataclass(frozen=True)
class KMaxResult:
    value: int
    capped: bool


def k_max_exact(params: FtParams, k_cap: int = K_CAP) -> KMaxResult:
    """Largest K with P(Bin(K d_C^2, p_eff) > t) <= p_target.

    The tail grows with K, so K is bracketed by doubling and then bisected.
    """
    d2, p, t = params.d_c**2, params.p_eff, params.t

    def ok(k):
        return binomial_upper_tail(k * d2, p, t) <= params.p_target

    if ok(k_cap):
        return KMaxResult(k_cap, True)
    lo, hi = 0, 1
    while ok(hi):
        lo, hi = hi, min(2 * hi, k_cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return KMaxResult(lo, False)


def logical_error_rate(params: FtParams) -> float:
    """(p_eff / p_th)^((d_C + 1) / 2)."""
    return (params.p_eff / params.p_th) ** ((params.d_c + 1) / 2)


def routing_rounds(d_c: int, n_l: int) -> int:
    """d_C * ceil(log2 N_L)."""
    return d_c * (n_l - 1).bit_length()


@dataclass(frozen=True)
class FtBudget:
    params: FtParams
    k_max_chernoff: int
    k_max_exact: int
    k_max_capped: bool
    p_l: float
    t_routing: int
    p_l_total: float
    p_l_total_exact: float
    composed_depth: int | None

    @property
    def p_eff(self) -> float:
        return self.params.p_eff

    @property
    def t(self) -> int:
        return self.params.t


def total_logical_error(params: FtParams) -> FtBudget:
    """Union bound N_L T p_L (capped at 1) and the exact 1 - (1 - p_L)^(N_L T)."""
    p_l = min(1.0, logical_error_rate(params))
    t_routing = routing_rounds(params.d_c, params.n_l)
    exposures = params.n_l * t_routing
    approx = min(1.0, exposures * p_l)
    exact = 1.0 if p_l >= 1 else -math.expm1(exposures * math.log1p(-p_l))
    kx = k_max_exact(params)
    try:
        composed = compose_syndrome_budget(params, correlated=False, k_max=kx.value)["total"]
    except BudgetInfeasibleError:
        composed = None
    return FtBudget(params, k_max_chernoff(params), kx.value, kx.capped, p_l, t_routing, approx, exact, composed)


def compose_syndrome_budget(params: FtParams, correlated: bool, k_max: int | None = None) -> dict:
    """Routing rounds plus syndrome rounds for stop-and-correct windows.

    Each window of ``k_max`` routing rounds costs one syndrome round with
    correlated decoding and d_C rounds without. ``k_max`` defaults to the
    exact binomial interval.
    """
    if k_max is None:
        k_max = k_max_exact(params).value
    if k_max < 1:
        raise BudgetInfeasibleError(
            f"no admissible correction window (K_max = {k_max}) at d_C={params.d_c}, p_eff={params.p_eff:g}"
        )
    route = routing_rounds(params.d_c, params.n_l)
    windows = -(-route // k_max)
    syndrome = windows * (1 if correlated else params.d_c)
    return {
        "routing_rounds": route,
        "k_max": k_max,
        "windows": windows,
        "syndrome_rounds": syndrome,
        "total": route + syndrome,
        "correlated": correlated,
    }


@dataclass
class OperatingPoint:
    p_phys: float
    p_eff: float
    ratio: float
    log10_p_l: dict[int, float | None]
    regime: str
    notes: list[str] = field(default_factory=list)


def _regime_label(ratio: float, p_eff: float, p_th: float, d_c_set) -> str:
    if math.isclose(ratio, 1.0, rel_tol=1e-9):
        return "at threshold"
    if ratio > 1:
        return "supercritical"
    if ratio <= 0.01 * (1 + 1e-9):
        return "strongly suppressed"
    for d in sorted(d_c_set):
        if (ratio ** ((d + 1) / 2)) <= p_eff * (1 + 1e-9):
            return f"FT-viable for d_C >= {d}"
    return "subthreshold, no suppression at listed d_C"


def operating_point_table(
    p_phys_rows,
    d_c_set=(5, 7, 9),
    c_circ: float = 10.0,
    p_th: float = 1e-2,
    reference: dict | None = None,
) -> list[OperatingPoint]:
    """One row per physical error rate with log10 p_L per code distance.

    Rows whose listed reference exponents disagree with the computed values
    carry a note; the note also says when the reference instead matches the
    ratio p_phys / p_th.
    """
    reference = REFERENCE_LOG10_PL if reference is None else reference
    rows = []
    for p_phys in p_phys_rows:
        p_eff = c_circ * p_phys
        ratio = p_eff / p_th
        logs = {d: (None if ratio >= 1 and not math.isclose(ratio, 1.0) else
                    ((d + 1) / 2) * math.log10(ratio)) for d in d_c_set}
        row = OperatingPoint(p_phys, p_eff, ratio, logs, _regime_label(ratio, p_eff, p_th, d_c_set))
        ref = next((v for k, v in reference.items() if math.isclose(k, p_phys)), None)
        if ref:
            computed = {d: ((d + 1) / 2) * math.log10(ratio) for d in ref}
            bad = {d: v for d, v in ref.items() if abs(computed[d] - v) > 1e-6}
            if bad:
                alt = all(abs(((d + 1) / 2) * math.log10(p_phys / p_th) - v) < 1e-6 for d, v in ref.items())
                ds = "/".join(str(d) for d in ref)
                note = (
                    f"FLAG p_phys={p_phys:g}: computed log10 p_L = "
                    + "/".join(f"{computed[d]:.0f}" for d in ref)
                    + f" (d_C={ds}) vs reference "
                    + "/".join(str(v) for v in ref.values())
                )
                if alt:
                    note += "; reference matches p_phys/p_th rather than p_eff/p_th"
                row.notes.append(note)
        rows.append(row)
    return rows


def k_max_report(d_c: int, p_eff: float, p_target: float) -> dict:
    """Both interval estimates next to any quoted reference value."""
    params = FtParams.from_p_eff(p_eff, d_c, p_target=p_target)
    chern = k_max_chernoff(params)
    exact = k_max_exact(params)
    ref = next((v for k, v in REFERENCE_K_MAX.items()
                if k[0] == d_c and math.isclose(k[1], p_eff) and math.isclose(k[2], p_target)), None)
    mu = ref * d_c**2 * p_eff if ref is not None else None
    notes = []
    if ref is not None and ref != chern:
        notes.append(
            f"UNRECONCILED: reference K_max ~ {ref} (mean errors {mu:.2f}) at d_C={d_c}, "
            f"p_eff={p_eff:g}, p_target={p_target:g}; closed-form bound gives {chern}, "
            f"exact binomial scan gives {exact.value}"
        )
    return {
        "d_c": d_c,
        "p_eff": p_eff,
        "p_target": p_target,
        "t": params.t,
        "k_max_chernoff": chern,
        "k_max_exact": exact.value,
        "k_max_capped": exact.capped,
        "reference": ref,
        "notes": notes,
    }
