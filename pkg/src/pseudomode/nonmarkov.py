"""Distinguishability backflow (BLP measure) and the two-parameter scan.

For local amplitude damping the optimal state pair is the ground/excited pair,
whose trace distance is exactly the survival probability |M(t)|^2.  The
single-emitter measure N1 sums every increase of that distance; the two-qubit
measure doubles it.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .amplitude import (
    amplitude_derivative,
    amplitude_residue,
    characteristic_cubic,
    survival_function,
)
from .reservoir import ReservoirParams

DEFAULT_MAX_HORIZON = 1e5
_TAIL_LEVEL = 1e-6          # |M|^2 must fall below this by the horizon


def trace_distance(rho_a, rho_b) -> float:
    """Half the trace norm of the difference of two density matrices."""
    a = np.asarray(rho_a, dtype=complex)
    b = np.asarray(rho_b, dtype=complex)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("trace_distance requires two equal-size square matrices")
    for m in (a, b):
        if np.abs(m - m.conj().T).max() > 1e-8:
            raise ValueError("inputs must be Hermitian density matrices")
    return float(0.5 * np.abs(np.linalg.eigvalsh(a - b)).sum())


@dataclass(frozen=True)
class NonMarkovResult:
    """Backflow measure for one emitter (n1), for the pair (n = 2*n1)."""

    n1: float
    n: float
    revival_intervals: tuple[tuple[float, float], ...]
    converged: bool
    horizon: float


def _auto_horizon(params: ReservoirParams, max_horizon: float) -> tuple[float, bool]:
    surv = survival_function(params)
    h = 8.0 / min(params.lambda1, params.lambda2)
    h = max(h, 10.0)
    while h < max_horizon:
        if surv(h) < _TAIL_LEVEL:
            return h, True
        h *= 2.0
    return max_horizon, bool(surv(max_horizon) < _TAIL_LEVEL)


def _default_step(params: ReservoirParams) -> float:
    cubic = characteristic_cubic(params)
    fastest = max(np.abs(cubic.roots).max(), 1e-6)
    return min(0.02 / fastest, 0.05 / max(min(params.lambda1, params.lambda2), 1e-6))


def blp_measure(
    params: ReservoirParams,
    horizon: float | None = None,
    dt: float | None = None,
    max_horizon: float = DEFAULT_MAX_HORIZON,
) -> NonMarkovResult:
    """Total backflow of distinguishability for the ground/excited pair.

    The distance D(t) = |M(t)|^2 is sampled on a uniform grid; each maximal
    increasing run contributes D(end) - D(start), with the run boundaries
    (extrema of D) refined by bisection on dD/dt where the closed form is
    available.  If |M|^2 has not fallen below 1e-6 by ``max_horizon`` the
    result is flagged as not converged.
    """
    converged = True
    if horizon is None:
        horizon, converged = _auto_horizon(params, max_horizon)
    else:
        converged = bool(survival_function(params)(horizon) < _TAIL_LEVEL)
    if dt is None:
        dt = _default_step(params)
    n = int(np.ceil(horizon / dt)) + 1
    n = min(max(n, 16), 4_000_000)
    ts = np.linspace(0.0, horizon, n)

    cubic = characteristic_cubic(params)
    if cubic.degenerate:
        from .amplitude import amplitude_ode  # fallback route

        d_vals = amplitude_ode(ts, params).survival
        d_dot = None
    else:
        m = amplitude_residue(ts, params, cubic=cubic)
        d_vals = np.abs(m) ** 2

        def d_dot(t, _c=cubic):
            mv = amplitude_residue(float(t), params, cubic=_c)
            dv = amplitude_derivative(float(t), params, cubic=_c)
            return 2.0 * (np.conjugate(mv) * dv).real

    diffs = np.diff(d_vals)
    increasing = diffs > 0.0
    if not np.any(increasing):
        return NonMarkovResult(0.0, 0.0, (), converged, float(horizon))

    # maximal increasing runs in index space
    idx = np.flatnonzero(increasing)
    splits = np.flatnonzero(np.diff(idx) > 1)
    run_starts = np.concatenate(([0], splits + 1))
    run_ends = np.concatenate((splits, [idx.size - 1]))

    def refine(center: int) -> float:
        # an extremum of D lies within one grid step of ts[center]; locate
        # the zero of dD/dt inside that two-step bracket
        if d_dot is None:
            return float(ts[center])
        lo = float(ts[max(center - 1, 0)])
        hi = float(ts[min(center + 1, ts.size - 1)])
        fa, fb = d_dot(lo), d_dot(hi)
        if fa == 0.0:
            return lo
        if fb == 0.0:
            return hi
        if fa * fb > 0:           # derivative did not change sign; keep grid point
            return float(ts[center])
        return float(brentq(d_dot, lo, hi, xtol=1e-10))

    n1 = 0.0
    intervals: list[tuple[float, float]] = []
    for s, e in zip(run_starts, run_ends):
        i0 = int(idx[s])          # secant increases from ts[i0] to ts[i1]
        i1 = int(idx[e]) + 1
        t_lo = ts[0] if i0 == 0 else refine(i0)
        t_hi = ts[-1] if i1 == ts.size - 1 else refine(i1)
        if d_dot is None:
            d_lo = d_vals[i0]
            d_hi = d_vals[i1]
        else:
            d_lo = float(np.abs(amplitude_residue(t_lo, params, cubic=cubic)) ** 2)
            d_hi = float(np.abs(amplitude_residue(t_hi, params, cubic=cubic)) ** 2)
        gain = d_hi - d_lo
        if gain > 0:
            n1 += gain
            intervals.append((float(t_lo), float(t_hi)))

    return NonMarkovResult(
        n1=float(n1),
        n=float(2.0 * n1),
        revival_intervals=tuple(intervals),
        converged=converged,
        horizon=float(horizon),
    )


def _scan_cell(args):
    base, names, v1, v2, horizon, dt, max_horizon = args
    params = replace(base, **{names[0]: v1, names[1]: v2})
    res = blp_measure(params, horizon=horizon, dt=dt, max_horizon=max_horizon)
    return res.n, res.converged


def contour_scan(
    axis1_values,
    axis2_values,
    base_params: ReservoirParams,
    axis_names: tuple[str, str] = ("gamma1", "gamma2"),
    workers: int = 1,
    horizon: float | None = None,
    dt: float | None = None,
    max_horizon: float = DEFAULT_MAX_HORIZON,
) -> tuple[np.ndarray, np.ndarray]:
    """Backflow measure over a rectangular parameter grid.

    Returns (matrix, converged) with shape (len(axis1), len(axis2)), row-major
    over axis1.  Cells are independent; with ``workers > 1`` they are farmed
    out to a process pool, with results written back by index so the output
    never depends on the worker count.
    """
    a1 = np.asarray(axis1_values, dtype=float)
    a2 = np.asarray(axis2_values, dtype=float)
    if a1.ndim != 1 or a2.ndim != 1 or a1.size == 0 or a2.size == 0:
        raise ValueError("axis value arrays must be non-empty and 1-D")
    for name in axis_names:
        if name not in ("gamma1", "gamma2", "lambda1", "lambda2"):
            raise ValueError(f"unknown scan axis {name!r}")

    jobs = [
        (base_params, axis_names, float(v1), float(v2), horizon, dt, max_horizon)
        for v1 in a1
        for v2 in a2
    ]
    matrix = np.empty((a1.size, a2.size), dtype=float)
    flags = np.empty((a1.size, a2.size), dtype=bool)
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_cell, jobs, chunksize=8))
    else:
        results = [_scan_cell(j) for j in jobs]
    for flat, (val, ok) in enumerate(results):
        i, j = divmod(flat, a2.size)
        matrix[i, j] = val
        flags[i, j] = ok
    return matrix, flags
