"""Stroboscopic dynamics under repeated projective measurements.

After each interval T the pair is projected back onto its initial Bell state
and the reservoir restarts from vacuum, so the survival probability compounds:
P_N(NT) = |M(T)|^(2N) = exp(-gamma_z(T) * NT) with the effective rate
gamma_z(T) = -ln|M(T)|^2 / T.  Short intervals freeze the decay (Zeno);
intermediate ones accelerate it (anti-Zeno).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .amplitude import survival_function
from .quantifiers import WitnessTrace, eur_lhs, leu, witness_trace
from .reservoir import ReservoirParams
from .xstate import bell_xstate

# Below this survival the effective rate is reported saturated, not infinite.
SURVIVAL_FLOOR = 1e-300


class SaturatedRateWarning(RuntimeWarning):
    """The measured survival underflowed; the returned rate is a floor value."""


def _rate_from_survival(p: float, interval: float) -> float:
    if p < SURVIVAL_FLOOR:
        warnings.warn(
            f"survival {p:.3g} below {SURVIVAL_FLOOR:.0e}; "
            "effective rate saturated",
            SaturatedRateWarning,
            stacklevel=3,
        )
        p = SURVIVAL_FLOOR
    return -math.log(p) / interval


def effective_decay_rate(interval: float, params: ReservoirParams) -> float:
    """gamma_z(T) = -ln|M(T)|^2 / T (natural log, so P_N(t) = e^{-gamma_z t})."""
    if interval <= 0:
        raise ValueError("measurement interval must be positive")
    p = float(survival_function(params)(interval))
    return _rate_from_survival(p, interval)


@dataclass(frozen=True)
class ZenoSchedule:
    """Measurement interval, total horizon and the induced effective rate."""

    interval: float
    horizon: float
    effective_rate: float

    def __post_init__(self):
        if self.interval <= 0:
            raise ValueError("interval must be positive")
        if self.horizon < self.interval:
            raise ValueError("horizon must cover at least one interval")
        if self.effective_rate < 0:
            raise ValueError("effective rate cannot be negative")

    @classmethod
    def for_params(
        cls, interval: float, horizon: float, params: ReservoirParams
    ) -> "ZenoSchedule":
        return cls(
            interval=interval,
            horizon=horizon,
            effective_rate=effective_decay_rate(interval, params),
        )


def zeno_concurrence(t, schedule: ZenoSchedule, params: ReservoirParams):
    """Concurrence of the measured pair at time t.

    On the measurement lattice t = N*T this is exp(-gamma_z * N * T), i.e.
    |M(T)|^(2N); between measurements the pair evolves freely since the last
    projection, contributing a partial factor |M(t mod T)|^2.
    """
    if schedule.interval <= 0:
        raise ValueError("interval must be positive")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("time must be non-negative")
    k = t_arr / schedule.interval
    n = np.floor(k + 1e-9)
    rem = np.maximum(k - n, 0.0) * schedule.interval
    lattice = np.exp(-schedule.effective_rate * n * schedule.interval)
    partial = survival_function(params)(rem)
    out = np.minimum(lattice * partial, 1.0)
    if np.ndim(t) == 0:
        return float(out)
    return out


def zeno_witness_trace(
    schedule: ZenoSchedule | None,
    params: ReservoirParams,
    grid,
) -> WitnessTrace:
    """Witness quantities for the measured pair sampled on ``grid``.

    Witness windows are read off the measurement lattice t = T, 2T, ... (the
    protocol's record only exists after measurements; this is also why a long
    interval yields no window at all even though the pair starts maximally
    entangled).  Crossings of the bound are located by linear interpolation
    between adjacent lattice points, and windows are clipped at the horizon.

    With ``schedule=None`` the unmeasured trace is returned for reference.
    """
    grid = np.asarray(grid, dtype=float)
    surv = survival_function(params)
    if schedule is None:
        return witness_trace(grid, surv(grid), refine=surv)

    conc = np.asarray(zeno_concurrence(grid, schedule, params), dtype=float)
    eur = np.empty_like(conc)
    for i, c in enumerate(conc):
        eur[i] = eur_lhs(bell_xstate(c))
    leu_vals = leu(conc)

    n_meas = int(math.floor(schedule.horizon / schedule.interval + 1e-9))
    counts = np.arange(1, n_meas + 1, dtype=float)
    lattice_t = counts * schedule.interval
    lattice_leu = leu(
        np.exp(-schedule.effective_rate * counts * schedule.interval)
    )
    windows = _lattice_windows(lattice_t, lattice_leu)
    return WitnessTrace(
        times=grid,
        concurrence=conc,
        leu=leu_vals,
        eur_lhs=eur,
        windows=tuple(windows),
    )


def _lattice_windows(times: np.ndarray, vals: np.ndarray) -> list[tuple[float, float]]:
    active = vals < 1.0
    if not np.any(active):
        return []

    def interp(i_out: int, i_in: int) -> float:
        a, b = times[i_out], times[i_in]
        va, vb = vals[i_out], vals[i_in]
        if va == vb:
            return float(b)
        return float(a + (1.0 - va) * (b - a) / (vb - va))

    windows: list[tuple[float, float]] = []
    idx = np.flatnonzero(active)
    splits = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([0], splits + 1))
    ends = np.concatenate((splits, [idx.size - 1]))
    for s, e in zip(starts, ends):
        i0, i1 = int(idx[s]), int(idx[e])
        t0 = times[i0] if i0 == 0 else interp(i0 - 1, i0)
        t1 = times[i1] if i1 == times.size - 1 else interp(i1 + 1, i1)
        windows.append((float(t0), float(t1)))
    return windows
