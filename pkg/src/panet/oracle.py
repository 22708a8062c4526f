"""Numeric integration of the expectation recurrences for N_n(d) and
S_n(d), used to cross-check the closed forms without simulation noise.

The integrators iterate the leading-order master equations (all O-terms
dropped) from the exact seed-graph values, so the only discrepancy against
the closed forms is the genuine finite-n error.  Update factors are clamped
into [0, 1]: for degrees d with (Ad+B) > n the factor would go negative,
but those rows carry no mass at such small n (the recurrence moves mass up
one degree per step), so clamping never distorts a populated row.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ModelParams
from .theory import build_theory_curve, c_exact, expected_sum_squares

__all__ = [
    "RecurrenceTable",
    "integrate_N",
    "integrate_S",
    "compare_closed_form",
]


@dataclass(frozen=True)
class RecurrenceTable:
    """Integrated expectations recorded at the checkpoint sizes n_values.

    N[i][d] and S[i][d] approximate E N_n(d) and E S_n(d) at
    n = n_values[i]; S is None for N-only integrations.  W holds the
    leading-term E W_n at the checkpoints.
    """

    params: ModelParams
    n_values: np.ndarray
    d_max: int
    N: np.ndarray
    S: np.ndarray | None
    W: np.ndarray


def _seed_state(p: ModelParams, d_max: int) -> tuple[int, np.ndarray, np.ndarray]:
    """Exact N, S vectors of the doubled-clique seed on m+1 vertices."""
    m = p.m
    if d_max < 2 * m:
        raise ValueError(f"d_max must be >= 2m = {2 * m} to hold the seed")
    n0 = m + 1
    N = np.zeros(d_max + 1)
    S = np.zeros(d_max + 1)
    N[2 * m] = n0
    # Every vertex has 2m neighbor slots, each of degree 2m.
    S[2 * m] = n0 * (2 * m) * (2 * m)
    return n0, N, S


def _checkpoints(n_end: int, record_at, n0: int) -> np.ndarray:
    if record_at is None:
        record_at = [n_end]
    pts = np.unique(np.asarray(record_at, dtype=np.int64))
    if pts[0] < n0 or pts[-1] > n_end:
        raise ValueError(f"checkpoints must lie in [{n0}, {n_end}]")
    return pts


def integrate_N(
    p: ModelParams, n_end: int, d_max: int, record_at=None
) -> RecurrenceTable:
    """Iterate E N_{n+1}(d) = E N_n(d)(1-(Ad+B)/n)
    + E N_n(d-1)(A(d-1)+B)/n + [d=m] from the exact seed counts."""
    if p.A >= 1.0:
        raise ValueError(f"N-recurrence requires A < 1, got A={p.A}")
    m, A, B = p.m, p.A, p.B
    n0, N, _ = _seed_state(p, d_max)
    if n_end < n0:
        raise ValueError(f"n_end must be >= seed size {n0}, got {n_end}")
    pts = _checkpoints(n_end, record_at, n0)

    d = np.arange(d_max + 1, dtype=float)
    rate = A * d + B  # attachment rate per degree row
    out_N = np.empty((len(pts), d_max + 1))
    snap = 0
    if pts[snap] == n0:
        out_N[snap] = N
        snap += 1
    for n in range(n0, n_end):
        stay = np.clip(1.0 - rate / n, 0.0, 1.0)
        inflow = np.clip(rate / n, 0.0, 1.0)
        nxt = N * stay
        nxt[1:] += N[:-1] * inflow[:-1]
        nxt[m] += 1.0
        N = nxt
        if snap < len(pts) and pts[snap] == n + 1:
            out_N[snap] = N
            snap += 1
    W = p.m / (1.0 - 2.0 * p.A) * (p.m + 4.0 * p.B + 1.0) * pts if p.A < 0.5 else np.full(len(pts), np.nan)
    return RecurrenceTable(params=p, n_values=pts, d_max=d_max, N=out_N, S=None, W=W)


def integrate_S(
    p: ModelParams, n_end: int, d_max: int, record_at=None
) -> RecurrenceTable:
    """Jointly iterate the N-recurrence and the S-recurrence.

    The d = m row uses the seed-degree form with the leading-term E W_n;
    rows d > m use the four-term recurrence driven by N and S at d-1.
    """
    if p.A >= 0.5:
        raise ValueError(
            f"S-recurrence uses the subcritical E W_n leading term; got A={p.A}"
        )
    m, A, B, D = p.m, p.A, p.B, p.D
    n0, N, S = _seed_state(p, d_max)
    if n_end < n0:
        raise ValueError(f"n_end must be >= seed size {n0}, got {n_end}")
    pts = _checkpoints(n_end, record_at, n0)

    d = np.arange(d_max + 1, dtype=float)
    rate = A * d + B
    rate_prev = A * (d - 1.0) + B  # A(d-1)+B per row
    n_inflow_coef = D * (d - 1.0) / m + m * rate_prev  # multiplies N(d-1)/n
    n_same_coef = (B - D / m) * d  # multiplies N(d)/n
    w_rate = A * m * (m + 4.0 * B + 1.0) / (1.0 - 2.0 * A)  # A*E W_n / n
    const_m = w_rate + (2.0 * B + 1.0) * m

    out_N = np.empty((len(pts), d_max + 1))
    out_S = np.empty((len(pts), d_max + 1))
    snap = 0
    if pts[snap] == n0:
        out_N[snap], out_S[snap] = N, S
        snap += 1
    for n in range(n0, n_end):
        stay_N = np.clip(1.0 - rate / n, 0.0, 1.0)
        up = np.clip(rate / n, 0.0, 1.0)
        stay_S = np.clip(1.0 - rate_prev / n, 0.0, 1.0)

        nxt_S = S * stay_S
        nxt_S[1:] += S[:-1] * up[:-1] + N[:-1] * n_inflow_coef[1:] / n
        nxt_S += N * n_same_coef / n
        # d = m row: no inflow from below, W-driven source instead.
        nxt_S[m] = S[m] * stay_S[m] + (B - D / m) * m * N[m] / n + const_m
        nxt_S[:m] = 0.0

        nxt_N = N * stay_N
        nxt_N[1:] += N[:-1] * up[:-1]
        nxt_N[m] += 1.0

        N, S = nxt_N, nxt_S
        if snap < len(pts) and pts[snap] == n + 1:
            out_N[snap], out_S[snap] = N, S
            snap += 1
    W = expected_sum_squares(p, 1) * pts
    return RecurrenceTable(params=p, n_values=pts, d_max=d_max, N=out_N, S=out_S, W=W)


def compare_closed_form(table: RecurrenceTable, curve=None) -> dict[int, dict[str, float]]:
    """Relative gaps at the final checkpoint: S(d)/n vs M(d) and
    N(d)/n vs c(m,d), per degree d in [m, d_max]."""
    p = table.params
    if curve is not None and curve.params != p:
        raise ValueError("theory curve was built for different parameters")
    d_values = np.arange(p.m, table.d_max + 1)
    if curve is None and table.S is not None:
        curve = build_theory_curve(p, d_values)
    n = int(table.n_values[-1])
    report: dict[int, dict[str, float]] = {}
    c_vals = c_exact(p, d_values.astype(float))
    for j, d in enumerate(d_values):
        row = {"n": float(n)}
        c = c_vals[j]
        row["N_over_n"] = table.N[-1][d] / n
        row["c_closed"] = float(c)
        row["rel_err_N"] = abs(row["N_over_n"] - c) / c
        if table.S is not None:
            M = curve.M_at(int(d))
            row["S_over_n"] = table.S[-1][d] / n
            row["M_closed"] = M
            row["rel_err_S"] = abs(row["S_over_n"] - M) / M
        report[int(d)] = row
    return report
