"""Scenario runner: multi-seed generation, pooled statistics, theory
overlays and regression fits, reproducing the reference figures at desk
scale (n = 1e5 by default instead of 1e6; pass full=True to presets for
the original sizes).

Determinism: every (n, seed-index) run derives its generator seed from the
scenario root seed, and aggregation folds results in (n, seed-index) order,
so output bytes do not depend on worker scheduling.  Worker count comes
from the PANET_WORKERS environment variable (default: serial).
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from .graphgen import child_seed, generate
from .metrics import degree_profile, log_binned_curve
from .params import ModelParams, derive_generator_params, make_model_params
from .theory import (
    build_theory_curve,
    c_exact,
    dnn_hypothesis_critical,
    dnn_hypothesis_supercritical,
    dnn_theory,
)

__all__ = [
    "Scenario",
    "ScenarioResult",
    "run_scenario",
    "fit_power_exponent",
    "fit_hypothesis_constant",
    "theory_tables",
    "pooled_ccdf",
    "PRESETS",
    "make_preset",
]


@dataclass(frozen=True)
class Scenario:
    """One experiment: fixed model parameters, a list of sizes, seed count."""

    name: str
    m: int
    A: float
    D: float
    n_list: tuple[int, ...]
    seeds: int | tuple[int, ...] = 10  # one count, or one per entry of n_list
    d0: int | None = None  # probe degree, default m+1
    outputs: tuple[str, ...] = ("dnn_vs_d",)
    support_threshold: int = 10
    root_seed: int = 20240901

    def __post_init__(self):
        if self.probe_degree <= self.m:
            raise ValueError(f"probe degree must exceed m = {self.m}")
        seeds = self.seeds_for_n
        if any(s < 1 for s in seeds):
            raise ValueError("seeds must be >= 1")
        if any(n < self.m + 1 for n in self.n_list):
            raise ValueError(f"all sizes must be >= seed size m+1 = {self.m + 1}")

    @property
    def probe_degree(self) -> int:
        return self.d0 if self.d0 is not None else self.m + 1

    @property
    def seeds_for_n(self) -> tuple[int, ...]:
        if isinstance(self.seeds, int):
            return tuple([self.seeds] * len(self.n_list))
        if len(self.seeds) != len(self.n_list):
            raise ValueError("per-size seed list must match n_list length")
        return tuple(self.seeds)

    @property
    def model(self) -> ModelParams:
        return make_model_params(self.m, self.A, self.D)

    def to_json(self) -> str:
        d = asdict(self)
        return json.dumps(d, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def from_json(text: str) -> "Scenario":
        d = json.loads(text)
        d["n_list"] = tuple(d["n_list"])
        if isinstance(d.get("seeds"), list):
            d["seeds"] = tuple(d["seeds"])
        d["outputs"] = tuple(d.get("outputs", ("dnn_vs_d",)))
        return Scenario(**d)


@dataclass
class ScenarioResult:
    scenario: Scenario
    # per size n: pooled degree histogram / neighbor-degree sums over seeds
    pooled_N: dict[int, dict[int, int]] = field(default_factory=dict)
    pooled_S: dict[int, dict[int, int]] = field(default_factory=dict)
    # per size n: per-seed probe values and W_n
    probe_per_seed: dict[int, list[float]] = field(default_factory=dict)
    W_per_seed: dict[int, list[int]] = field(default_factory=dict)
    fitted_constant: float | None = None

    def dnn_pooled(self, n: int, d: int) -> float:
        N = self.pooled_N[n].get(d, 0)
        if N == 0:
            return math.nan
        return self.pooled_S[n][d] / (N * d)

    def populated_degrees(self, n: int, threshold: int | None = None) -> list[int]:
        thr = self.scenario.support_threshold if threshold is None else threshold
        return sorted(d for d, c in self.pooled_N[n].items() if c >= thr)

    def probe_mean(self, n: int) -> float:
        vals = self.probe_per_seed[n]
        return float(np.mean(vals))

    def probe_stderr(self, n: int) -> float:
        vals = self.probe_per_seed[n]
        if len(vals) < 2:
            return math.nan
        return float(np.std(vals, ddof=1) / math.sqrt(len(vals)))


def _run_one(args) -> tuple[int, int, dict[int, int], dict[int, int], int, float]:
    m, A, D, n, seed, d0 = args
    gp = derive_generator_params(m, A, D)
    g = generate(gp, n, seed)
    prof = degree_profile(g)
    probe = math.nan
    if prof.N.get(d0, 0) > 0:
        probe = prof.S[d0] / (prof.N[d0] * d0)
    return n, seed, prof.N, prof.S, prof.W, probe


def run_scenario(s: Scenario, workers: int | None = None) -> ScenarioResult:
    """Generate seeds x sizes graphs, pool per-degree statistics, keep
    per-seed probe values for error bars."""
    if workers is None:
        workers = int(os.environ.get("PANET_WORKERS", "1"))
    d0 = s.probe_degree
    tasks = []
    for n, n_seeds in zip(s.n_list, s.seeds_for_n):
        for i in range(n_seeds):
            tasks.append((s.m, s.A, s.D, n, child_seed(s.root_seed, n, i), d0))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raws = list(pool.map(_run_one, tasks, chunksize=4))
    else:
        raws = [_run_one(t) for t in tasks]

    res = ScenarioResult(scenario=s)
    for n, _seed, N, S, W, probe in raws:  # task order == (n, seed) order
        pn = res.pooled_N.setdefault(n, {})
        ps = res.pooled_S.setdefault(n, {})
        for d, c in N.items():
            pn[d] = pn.get(d, 0) + c
            ps[d] = ps.get(d, 0) + S[d]
        res.W_per_seed.setdefault(n, []).append(W)
        res.probe_per_seed.setdefault(n, []).append(probe)

    if s.A > 0.5:
        res.fitted_constant = fit_hypothesis_constant(res, "supercritical")
    elif s.A == 0.5:
        res.fitted_constant = fit_hypothesis_constant(res, "critical")
    return res


def fit_power_exponent(points, weights=None) -> tuple[float, float, float]:
    """Least-squares line through (ln x, ln y): returns (slope, intercept,
    slope standard error).  All inputs must be positive."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise ValueError("power-law fit needs positive x and y")
    lx = np.log([x for x, _ in pts])
    ly = np.log([y for _, y in pts])
    if np.ptp(lx) == 0:
        raise ValueError("degenerate x-range")
    w = np.ones(len(pts)) if weights is None else np.asarray(weights, dtype=float)
    wsum = w.sum()
    mx = float(np.dot(w, lx) / wsum)
    my = float(np.dot(w, ly) / wsum)
    sxx = float(np.dot(w, (lx - mx) ** 2))
    slope = float(np.dot(w, (lx - mx) * (ly - my)) / sxx)
    intercept = my - slope * mx
    resid = ly - (intercept + slope * lx)
    dof = max(len(pts) - 2, 1)
    var = float(np.dot(w, resid**2) / wsum) * len(pts) / dof
    stderr = math.sqrt(var / sxx)
    return slope, intercept, stderr


def fit_hypothesis_constant(res: ScenarioResult, regime: str) -> float:
    """Least-squares scale factor of the hypothesis predictor against the
    pooled empirical curve over every populated (d, n) cell.  One constant
    serves both the d-sweep and the n-sweep outputs."""
    s = res.scenario
    p = s.model
    if regime == "supercritical":
        if p.A <= 0.5:
            raise ValueError(f"supercritical fit needs A > 1/2, got A={p.A}")
        unit = lambda d, n: dnn_hypothesis_supercritical(p, d, n, 1.0)
    elif regime == "critical":
        if p.A != 0.5:
            raise ValueError(f"critical fit needs A = 1/2, got A={p.A}")
        unit = lambda d, n: dnn_hypothesis_critical(s.m, n, 1.0, d=d)
    else:
        raise ValueError(f"unknown regime {regime!r}")
    num = den = 0.0
    cells = 0
    for n in res.pooled_N:
        for d in res.populated_degrees(n):
            y = res.dnn_pooled(n, d)
            u = unit(d, n)
            num += u * y
            den += u * u
            cells += 1
    if cells == 0:
        raise ValueError("no populated (d, n) cells to fit")
    return num / den


def theory_tables(p: ModelParams, d_max: int, n_list=(), C1: float = 1.0, C2: float = 1.0):
    """Theory-only rows per degree: subcritical closed forms for A < 1/2,
    hypothesis predictor columns for A >= 1/2 (one block per n)."""
    d_values = np.arange(p.m, d_max + 1)
    rows = []
    if p.A < 0.5:
        curve = build_theory_curve(p, d_values)
        for i, d in enumerate(d_values):
            rows.append(
                {
                    "d": int(d),
                    "c_exact": float(curve.c_exact[i]),
                    "c_asym": float(curve.c_asymptotic[i]),
                    "M": float(curve.M_exact[i]),
                    "dnn_theory": float(curve.dnn_exact[i]),
                    "dnn_asym": float(curve.dnn_asymptotic[i]),
                }
            )
        return rows
    n_list = tuple(n_list) or (10**5,)
    for n in n_list:
        for d in d_values:
            row = {"d": int(d), "n": int(n), "c_exact": c_exact(p, float(d))}
            if p.A > 0.5:
                row["dnn_hyp"] = dnn_hypothesis_supercritical(p, int(d), n, C1)
                row["dnn_hyp_asym"] = dnn_hypothesis_supercritical(
                    p, int(d), n, C1, form="asymptotic"
                )
            else:
                row["dnn_hyp"] = dnn_hypothesis_critical(p.m, n, C2, d=int(d))
                row["dnn_hyp_asym"] = dnn_hypothesis_critical(p.m, n, C2)
            rows.append(row)
    return rows


def pooled_ccdf(res: ScenarioResult, n: int) -> dict[int, float]:
    """Empirical degree CCDF P(deg >= d) pooled over seeds at size n."""
    N = res.pooled_N[n]
    total = sum(N.values())
    out = {}
    acc = 0
    for d in sorted(N, reverse=True):
        acc += N[d]
        out[d] = acc / total
    return dict(sorted(out.items()))


def ccdf_slope(res: ScenarioResult, n: int, d_min: int = 10, min_count: int = 20):
    """Log-binned power-law fit of the pooled CCDF tail (d >= d_min)."""
    ccdf = pooled_ccdf(res, n)
    total = sum(res.pooled_N[n].values())
    pts = {d: v for d, v in ccdf.items() if d >= d_min and v * total >= min_count}
    binned = log_binned_curve(pts, bins_per_decade=4)
    return fit_power_exponent([(c, v) for c, v, _ in binned])


# ---------------------------------------------------------------------------
# Figure presets (desk scale; full=True restores the reference sizes).

def _sizes(full: bool, *desk: int) -> tuple[int, ...]:
    return tuple(10 * x for x in desk) if full else desk


def make_preset(name: str, full: bool = False, n: int | None = None, seeds: int | None = None):
    """Build the scenario list for a named figure preset.

    Returns a list of Scenario (sweep figures expand into one scenario per
    swept parameter value).  n/seeds override every entry (desk testing).
    """
    base_n = 10**6 if full else 10**5
    if n is not None:
        base_n = n

    def sc(tag, m, A, D, n_list, seeds_default, **kw):
        return Scenario(
            name=f"{name}{tag}",
            m=m,
            A=A,
            D=D,
            n_list=tuple(n_list),
            seeds=seeds if seeds is not None else seeds_default,
            **kw,
        )

    if name == "fig1a":
        return [sc("", 2, 0.2, 0.3, [base_n], 10)]
    if name == "fig1b":
        return [sc("", 2, 0.4, 0.3, [base_n], 10)]
    if name == "fig2":
        ns = _sizes(full, 10**3, 10**4, 10**5) if n is None else (base_n,)
        return [
            sc(f"_A{A:g}", 2, A, 0.2, ns, 10, outputs=("err_vs_n",))
            for A in (0.2, 0.3, 1 / 3, 0.4)
        ]
    if name == "fig3":
        return [sc("", 2, 0.2, 0.3, [base_n], 1, outputs=("theory_only",))]
    if name == "fig4":
        return [
            sc(f"_D{D:g}", 2, 0.25, D, [base_n], 10, outputs=("dnn_vs_D",))
            for D in (0.0, 0.1, 0.2, 0.3, 0.4, 0.45)
        ]
    if name == "fig5a":
        return [sc("", 2, 0.5, 0.2, [base_n], 10)]
    if name == "fig5b":
        return [sc("", 2, 0.6, 0.2, [base_n], 10)]
    if name in ("fig6a", "fig6b"):
        A = 0.5 if name == "fig6a" else 0.6
        ns = (
            _sizes(full, 10**4, 2 * 10**4, 4 * 10**4, 7 * 10**4, 10**5)
            if n is None
            else (base_n,)
        )
        return [sc("", 2, A, 0.2, ns, 10, outputs=("dnn_vs_n",))]
    raise ValueError(f"unknown preset {name!r}")


PRESETS = (
    "fig1a",
    "fig1b",
    "fig2",
    "fig3",
    "fig4",
    "fig5a",
    "fig5b",
    "fig6a",
    "fig6b",
)
