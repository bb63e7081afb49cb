"""Excited-state amplitude of the emitter, by two independent routes.

The reduced dynamics of a single emitter in the two-Lorentzian reservoir is
equivalent to resonant coupling to two lossy pseudomodes:

    dM/dt  = -i (g1*P1 + g2*P2)
    dPj/dt = -lambda_j*Pj - i*gj*M        (rotating frame)

Laplace transforming gives M(s) = A(s)/B(s) with A = (s+lambda1)(s+lambda2)
and B the monic cubic below, so M(t) is a sum of three exponentials whose
rates are the cubic roots.  ``amplitude_residue`` evaluates that closed form;
``amplitude_ode`` integrates the linear system directly and also tracks the
photon leakage out of each pseudomode, which makes the population balance
testable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .reservoir import ReservoirParams

# Roots closer than this (relative to the largest root magnitude) are treated
# as degenerate; the residue formula is then invalid and callers must fall
# back to the ODE route.
DEGENERACY_RTOL = 1e-9


class DegenerateRootsError(ValueError):
    """Raised when the residue route is asked to work with repeated roots."""


class IntegrationError(RuntimeError):
    """Adaptive integration failed (typically step-size underflow)."""


@dataclass(frozen=True)
class CubicSolution:
    """Roots of the characteristic cubic B(s) plus the numerator of M(s)."""

    roots: np.ndarray                 # three complex roots, sorted
    degenerate: bool                  # any pair of roots (nearly) coincident
    b_coeffs: tuple[float, float, float]   # B = s^3 + a*s^2 + b*s + c
    a_coeffs: tuple[float, float, float] = field(default=(1.0, 0.0, 0.0))

    def b_value(self, s):
        a, b, c = self.b_coeffs
        return ((s + a) * s + b) * s + c

    def b_derivative(self, s):
        a, b, _ = self.b_coeffs
        return (3.0 * s + 2.0 * a) * s + b

    def a_value(self, s):
        c2, c1, c0 = self.a_coeffs
        return (c2 * s + c1) * s + c0

    @property
    def residues(self) -> np.ndarray:
        """Residues A(s_i)/B'(s_i); they sum to 1 for simple roots."""
        if self.degenerate:
            raise DegenerateRootsError(
                "residues are undefined for repeated roots; use amplitude_ode"
            )
        return self.a_value(self.roots) / self.b_derivative(self.roots)


def _cubic_roots_closed_form(a: float, b: float, c: float) -> np.ndarray:
    """Roots of s^3 + a s^2 + b s + c with real coefficients (Cardano/trig)."""
    # depressed cubic t^3 + p t + q, s = t - a/3
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc > 0.0:
        # one real root, complex-conjugate pair
        sq = math.sqrt(disc)
        u = math.copysign(abs(-q / 2.0 + sq) ** (1.0 / 3.0), -q / 2.0 + sq)
        v = math.copysign(abs(-q / 2.0 - sq) ** (1.0 / 3.0), -q / 2.0 - sq)
        t1 = u + v
        re = -t1 / 2.0
        im = math.sqrt(3.0) * (u - v) / 2.0
        ts = np.array([t1, complex(re, im), complex(re, -im)], dtype=complex)
    elif p == 0.0 and q == 0.0:
        ts = np.zeros(3, dtype=complex)
    else:
        # three real roots (trigonometric form); p < 0 is guaranteed here
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg)
        ts = np.array(
            [m * math.cos((phi - 2.0 * math.pi * k) / 3.0) for k in range(3)],
            dtype=complex,
        )
    return ts - a / 3.0


def characteristic_cubic(params: ReservoirParams) -> CubicSolution:
    """Solve B(s) = 0 for the three amplitude decay exponents.

    B(s) = s^3 + s^2(l1+l2) + s(l1*l2 + g1*l1/2 + g2*l2/2) + l1*l2*(g1+g2)/2.
    Closed-form roots are polished with one Newton step each; nearly
    coincident roots only set the ``degenerate`` flag, they are not an error.
    """
    g1, g2 = params.gamma1, params.gamma2
    l1, l2 = params.lambda1, params.lambda2
    a = l1 + l2
    b = l1 * l2 + 0.5 * g1 * l1 + 0.5 * g2 * l2
    c = 0.5 * l1 * l2 * (g1 + g2)

    roots = _cubic_roots_closed_form(a, b, c)

    # one Newton iteration per root (skip where B' ~ 0, i.e. near degeneracy)
    bp = (3.0 * roots + 2.0 * a) * roots + b
    bv = ((roots + a) * roots + b) * roots + c
    safe = np.abs(bp) > 1e-14 * max(1.0, abs(b))
    roots = np.where(safe, roots - bv / np.where(safe, bp, 1.0), roots)

    # real coefficients: scrub spurious imaginary dust on real roots
    scale = max(np.abs(roots).max(), 1e-300)
    re_mask = np.abs(roots.imag) < 1e-12 * scale
    roots = np.where(re_mask, roots.real.astype(complex), roots)

    order = np.lexsort((roots.imag, roots.real))
    roots = roots[order]

    degenerate = False
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(roots[i] - roots[j]) < DEGENERACY_RTOL * scale:
                degenerate = True

    return CubicSolution(
        roots=roots,
        degenerate=degenerate,
        b_coeffs=(a, b, c),
        a_coeffs=(1.0, l1 + l2, l1 * l2),
    )


def amplitude_residue(
    t,
    params: ReservoirParams,
    m1_0: complex = 1.0,
    cubic: CubicSolution | None = None,
):
    """Closed-form amplitude M(t) = m1_0 * sum_i A(s_i) e^{s_i t} / B'(s_i).

    Accepts a scalar time or an array of non-negative times.  Raises
    DegenerateRootsError for (near-)repeated roots.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("amplitude_residue requires t >= 0")
    if cubic is None:
        cubic = characteristic_cubic(params)
    r = cubic.residues  # raises on degenerate roots
    out = m1_0 * np.exp(np.multiply.outer(t_arr, cubic.roots)) @ r
    if np.ndim(t) == 0:
        return complex(out)
    return out


def amplitude_derivative(
    t,
    params: ReservoirParams,
    m1_0: complex = 1.0,
    cubic: CubicSolution | None = None,
):
    """dM/dt from the same residue expansion (each term scaled by its root)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("amplitude_derivative requires t >= 0")
    if cubic is None:
        cubic = characteristic_cubic(params)
    r = cubic.residues * cubic.roots
    out = m1_0 * np.exp(np.multiply.outer(t_arr, cubic.roots)) @ r
    if np.ndim(t) == 0:
        return complex(out)
    return out


@dataclass(frozen=True)
class AmplitudeTrajectory:
    """Emitter and pseudomode amplitudes on a time grid, plus loss integrals.

    ``loss1``/``loss2`` accumulate 2*lambda_j * integral |Pj|^2 dt', the
    population leaked out of each pseudomode, so that

        |m1|^2 + |p1|^2 + |p2|^2 + loss1 + loss2 = 1

    holds along the whole trajectory (for m1(0) = 1).
    """

    times: np.ndarray
    m1: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    loss1: np.ndarray
    loss2: np.ndarray

    @property
    def survival(self) -> np.ndarray:
        """|M(t)|^2, clipped of floating-point excess above 1."""
        return np.minimum(np.abs(self.m1) ** 2, 1.0)

    @property
    def conservation(self) -> np.ndarray:
        """The five-term population sum; equals |m1(0)|^2 identically."""
        return (
            np.abs(self.m1) ** 2
            + np.abs(self.p1) ** 2
            + np.abs(self.p2) ** 2
            + self.loss1
            + self.loss2
        )


def amplitude_ode(
    grid,
    params: ReservoirParams,
    m1_0: complex = 1.0,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> AmplitudeTrajectory:
    """Integrate the pseudomode system with an adaptive Runge-Kutta pair.

    Parameters
    ----------
    grid : array_like
        Strictly increasing times starting at 0; the solution is reported
        exactly at these points (dense output).
    params : ReservoirParams
    m1_0 : complex
        Initial emitter amplitude; both pseudomodes start empty.

    Returns
    -------
    AmplitudeTrajectory
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("grid must be a 1-D array with at least two points")
    if grid[0] != 0.0:
        raise ValueError("grid must start at t = 0")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")

    g1, g2 = params.g1, params.g2
    l1, l2 = params.lambda1, params.lambda2

    def rhs(_t, y):
        m, p1, p2 = y[0], y[1], y[2]
        return np.array(
            [
                -1j * (g1 * p1 + g2 * p2),
                -l1 * p1 - 1j * g1 * m,
                -l2 * p2 - 1j * g2 * m,
                2.0 * l1 * (p1.real**2 + p1.imag**2) + 0j,
                2.0 * l2 * (p2.real**2 + p2.imag**2) + 0j,
            ]
        )

    y0 = np.array([m1_0, 0.0, 0.0, 0.0, 0.0], dtype=complex)
    sol = solve_ivp(
        rhs,
        (grid[0], grid[-1]),
        y0,
        method="DOP853",
        t_eval=grid,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        t_fail = sol.t[-1] if sol.t.size else grid[0]
        raise IntegrationError(
            f"amplitude integration failed near t = {t_fail:.6g}: {sol.message}"
        )
    return AmplitudeTrajectory(
        times=grid,
        m1=sol.y[0],
        p1=sol.y[1],
        p2=sol.y[2],
        loss1=sol.y[3].real,
        loss2=sol.y[4].real,
    )


def survival_function(params: ReservoirParams):
    """Return a vectorized t -> |M(t)|^2, preferring the closed form.

    Falls back to piecewise ODE evaluation when the characteristic roots are
    degenerate (where the residue formula does not apply).
    """
    cubic = characteristic_cubic(params)
    if not cubic.degenerate:
        def surv(t, _cubic=cubic):
            m = amplitude_residue(t, params, cubic=_cubic)
            return np.minimum(np.abs(m) ** 2, 1.0)
        return surv

    def surv_ode(t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        t_max = float(t_arr.max()) if t_arr.size else 0.0
        if t_max == 0.0:
            out = np.ones_like(t_arr)
        else:
            grid = np.union1d(np.array([0.0, t_max]), t_arr)
            traj = amplitude_ode(grid, params)
            sel = np.searchsorted(grid, t_arr)
            out = traj.survival[sel]
        if np.ndim(t) == 0:
            return float(out[0])
        return out

    return surv_ode
