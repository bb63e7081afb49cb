"""Reservoir definition: double-Lorentzian coupling spectrum and its memory kernel.

All rates are expressed in units of a reference decay rate (by convention the
first Lorentzian weight), and times in the inverse of that unit.  Dynamics are
computed in the frame rotating at the shared line center ``omega0``, so
``omega0`` never enters the equations of motion; it is kept on the parameter
record for bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

# Uniform default grids put this many points across the slowest timescale.
GRID_POINTS_PER_TIMESCALE = 2000
GRID_MAX_POINTS = 1_000_000


@dataclass(frozen=True)
class ReservoirParams:
    """Five numbers defining the two-Lorentzian reservoir.

    gamma1, gamma2 : weights of the two Lorentzian lines (decay rates, >= 0)
    lambda1, lambda2 : half-widths of the lines (> 0), i.e. pseudomode loss rates
    omega0 : shared line center; informational only (rotating frame)
    """

    gamma1: float
    gamma2: float
    lambda1: float
    lambda2: float
    omega0: float = 0.0

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "lambda1", "lambda2", "omega0"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise ValueError("gamma1 and gamma2 must be non-negative")
        if self.lambda1 <= 0 or self.lambda2 <= 0:
            raise ValueError("lambda1 and lambda2 must be positive")

    @property
    def g1(self) -> float:
        """Coupling strength to the first pseudomode, sqrt(gamma1*lambda1/2)."""
        return math.sqrt(self.gamma1 * self.lambda1 / 2.0)

    @property
    def g2(self) -> float:
        """Coupling strength to the second pseudomode, sqrt(gamma2*lambda2/2)."""
        return math.sqrt(self.gamma2 * self.lambda2 / 2.0)

    @property
    def poles(self) -> tuple[complex, complex]:
        """Lower-half-plane poles of the spectrum, omega0 - i*lambda_j."""
        return (
            complex(self.omega0, -self.lambda1),
            complex(self.omega0, -self.lambda2),
        )

    def swapped(self) -> "ReservoirParams":
        """Exchange the two Lorentzian lines (a symmetry of the model)."""
        return replace(
            self,
            gamma1=self.gamma2,
            gamma2=self.gamma1,
            lambda1=self.lambda2,
            lambda2=self.lambda1,
        )


def spectral_density(omega, params: ReservoirParams):
    """Coupling spectrum J(omega): sum of two Lorentzians centered at omega0.

    J = (1/2pi) * sum_j gamma_j*lambda_j^2 / ((omega-omega0)^2 + lambda_j^2)
    """
    d = np.asarray(omega, dtype=float) - params.omega0
    out = (
        params.gamma1 * params.lambda1**2 / (d**2 + params.lambda1**2)
        + params.gamma2 * params.lambda2**2 / (d**2 + params.lambda2**2)
    ) / (2.0 * np.pi)
    if np.ndim(omega) == 0:
        return float(out)
    return out


def correlation_kernel(dt, params: ReservoirParams, rotating: bool = True):
    """Reservoir memory kernel f(dt) = (1/2) sum_j gamma_j*lambda_j*exp(-i z_j dt).

    In the rotating frame (default) the carrier phase drops out and the kernel
    is a sum of plain decaying exponentials.  Negative lags are rejected.
    """
    dt_arr = np.asarray(dt, dtype=float)
    if np.any(dt_arr < 0):
        raise ValueError("correlation_kernel requires dt >= 0")
    out = 0.5 * (
        params.gamma1 * params.lambda1 * np.exp(-params.lambda1 * dt_arr)
        + params.gamma2 * params.lambda2 * np.exp(-params.lambda2 * dt_arr)
    ).astype(complex)
    if not rotating:
        out = out * np.exp(-1j * params.omega0 * dt_arr)
    if np.ndim(dt) == 0:
        return complex(out)
    return out


def default_grid(params: ReservoirParams, t_max: float) -> np.ndarray:
    """Uniform grid on [0, t_max] resolving the slowest timescale.

    Step is (slowest timescale)/2000 where the slowest timescale is
    max(1/min(lambda), 1/max(gamma)); total points capped at 1e6.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    scales = [1.0 / min(params.lambda1, params.lambda2)]
    gmax = max(params.gamma1, params.gamma2)
    if gmax > 0:
        scales.append(1.0 / gmax)
    slowest = max(scales)
    dt = slowest / GRID_POINTS_PER_TIMESCALE
    n = int(math.ceil(t_max / dt)) + 1
    n = min(max(n, 2), GRID_MAX_POINTS)
    return np.linspace(0.0, t_max, n)
