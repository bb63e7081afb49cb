"""Entanglement and uncertainty quantifiers, and the witness-window extractor.

The witness logic: measuring the complementary qubit observables sigma_x and
sigma_y on one side, the summed conditional entropies are bounded from below
by LEU = 1 + S(A|B) (in bits).  LEU < 1 certifies a negative conditional
entropy and hence entanglement; the maximal time intervals with LEU < 1 are
the witness windows.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import xlogy

from .xstate import XStateDensity, bell_xstate

_LN2 = np.log(2.0)
_EIG_CLAMP = 1e-12          # eigenvalues in [-1e-12, 0) are treated as 0
_DENSITY_TOL = 1e-8

# Pauli-y tensor Pauli-y in the |ee>,|eg>,|ge>,|gg> basis (real symmetric).
_SYSY = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ],
    dtype=complex,
)

# sigma_x / sigma_y eigenstates of the measured qubit, |e> first.
_X_BASIS = (
    np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
    np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0),
)
_Y_BASIS = (
    np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2.0),
    np.array([1.0, -1.0j], dtype=complex) / np.sqrt(2.0),
)


def _as_density(rho, dim: int | None = None) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if dim is not None and rho.shape[0] != dim:
        raise ValueError(f"expected a {dim}x{dim} density matrix")
    if np.abs(rho - rho.conj().T).max() > _DENSITY_TOL:
        raise ValueError("density matrix must be Hermitian")
    if abs(np.trace(rho).real - 1.0) > _DENSITY_TOL:
        raise ValueError("density matrix must have unit trace")
    if np.linalg.eigvalsh(rho).min() < -_DENSITY_TOL:
        raise ValueError("density matrix must be positive semidefinite")
    return rho


def _clamped_eigvalsh(rho: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvalsh(rho)
    return np.where((w < 0.0) & (w > -_EIG_CLAMP), 0.0, w)


def von_neumann_entropy(rho) -> float:
    """Entropy -sum a_i log2 a_i of a density matrix, in bits."""
    rho = _as_density(rho)
    w = _clamped_eigvalsh(rho)
    w = np.clip(w, 0.0, None)
    return float(-xlogy(w, w).sum() / _LN2)


def concurrence_wootters(rho) -> float:
    """Two-qubit concurrence from the spin-flipped spectrum.

    Equals max{0, sqrt(b1)-sqrt(b2)-sqrt(b3)-sqrt(b4)} with b_i the ordered
    eigenvalues of rho.(sy x sy).rho*.(sy x sy).  Computed via the singular
    values of sqrt(rho).(sy x sy).conj(sqrt(rho)), which are exactly those
    square roots but without the noise amplification of rooting tiny
    eigenvalues of the quartic product.
    """
    rho = _as_density(rho, dim=4)
    w, v = np.linalg.eigh(rho)
    w = np.clip(np.where((w < 0.0) & (w > -_EIG_CLAMP), 0.0, w), 0.0, None)
    sqrt_rho = (v * np.sqrt(w)) @ v.conj().T
    m = sqrt_rho @ _SYSY @ sqrt_rho.conj()
    sv = np.linalg.svd(m, compute_uv=False)
    return float(max(0.0, sv[0] - sv[1] - sv[2] - sv[3]))


def concurrence_x(rho: XStateDensity) -> float:
    """Concurrence shortcut for X states: 2*max{0, |rho23| - sqrt(rho11*rho44)}."""
    k = abs(rho.rho23) - np.sqrt(max(rho.rho11, 0.0) * max(rho.rho44, 0.0))
    return float(max(0.0, 2.0 * k))


def leu(concurrence):
    """Lower entropic-uncertainty bound as a function of concurrence, in bits.

    1 + H(C) - H(C/2) with H the binary entropy; leu(0) = 1 and leu(1) = 0.
    Accepts scalars or arrays in [0, 1].
    """
    c = np.asarray(concurrence, dtype=float)
    if np.any(c < -_EIG_CLAMP) or np.any(c > 1.0 + _EIG_CLAMP):
        raise ValueError("concurrence must lie in [0, 1]")
    c = np.clip(c, 0.0, 1.0)
    out = (
        -xlogy(1.0 - c, 1.0 - c)
        - xlogy(c, c)
        + xlogy(1.0 - c / 2.0, 1.0 - c / 2.0)
        + xlogy(c / 2.0, c / 2.0)
    ) / _LN2 + 1.0
    if np.ndim(concurrence) == 0:
        return float(out)
    return out


@lru_cache(maxsize=1)
def witness_threshold() -> float:
    """Concurrence C* at which leu crosses 1; entanglement is certified above it."""
    return float(brentq(lambda c: leu(c) - 1.0, 1e-6, 1.0 - 1e-12, xtol=1e-14))


def _post_measurement(rho: np.ndarray, basis) -> np.ndarray:
    out = np.zeros_like(rho)
    eye = np.eye(2, dtype=complex)
    for ket in basis:
        proj = np.kron(np.outer(ket, ket.conj()), eye)
        out += proj @ rho @ proj
    return out


def _reduced_b(rho: np.ndarray) -> np.ndarray:
    return rho[:2, :2] + rho[2:, 2:]


def eur_lhs(rho: XStateDensity | np.ndarray) -> float:
    """Summed conditional entropies S(Sx|B) + S(Sy|B) after measuring qubit A.

    Built from the explicit post-measurement states: qubit A is projected onto
    the sigma_x (resp. sigma_y) eigenbasis and the conditional entropy
    S(X|B) = S(rho_XB) - S(rho_B) is evaluated for each.
    """
    if isinstance(rho, XStateDensity):
        rho = rho.to_matrix()
    rho = _as_density(rho, dim=4)
    s_b = von_neumann_entropy(_reduced_b(rho))
    total = 0.0
    for basis in (_X_BASIS, _Y_BASIS):
        total += von_neumann_entropy(_post_measurement(rho, basis)) - s_b
    return float(total)


@dataclass(frozen=True)
class WitnessTrace:
    """Time series of the witness quantities plus the extracted windows."""

    times: np.ndarray
    concurrence: np.ndarray
    leu: np.ndarray
    eur_lhs: np.ndarray
    windows: tuple[tuple[float, float], ...]


def witness_windows(
    times,
    concurrence,
    refine: Callable[[float], float] | None = None,
    time_tol: float = 1e-4,
) -> list[tuple[float, float]]:
    """Maximal intervals where leu(C(t)) < 1, i.e. concurrence above threshold.

    Boundaries interior to the grid are refined to ``time_tol``: by bisection
    on leu(refine(t)) - 1 when ``refine`` (a continuous-time concurrence
    callable) is given, otherwise by linear interpolation of the grid leu
    values.  Windows touching the ends of the grid are clipped there.
    """
    times = np.asarray(times, dtype=float)
    vals = np.asarray(leu(concurrence), dtype=float)
    if times.shape != vals.shape:
        raise ValueError("times and concurrence must have matching shapes")
    active = vals < 1.0
    if not np.any(active):
        return []

    def crossing(i_out: int, i_in: int) -> float:
        a, b = times[i_out], times[i_in]
        if refine is not None:
            g = lambda t: leu(float(refine(t))) - 1.0
            ga, gb = g(a), g(b)
            if ga == 0.0:
                return a
            if ga * gb > 0:          # grid and refine disagree; keep grid edge
                return b if a < b else a
            lo, hi = (a, b) if a < b else (b, a)
            return float(brentq(g, lo, hi, xtol=time_tol))
        # linear interpolation of leu through 1
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
        t0 = times[0] if i0 == 0 else crossing(i0 - 1, i0)
        t1 = times[-1] if i1 == times.size - 1 else crossing(i1 + 1, i1)
        windows.append((float(t0), float(t1)))
    return windows


def witness_trace(
    times,
    survival,
    refine: Callable[[float], float] | None = None,
) -> WitnessTrace:
    """Assemble concurrence, leu and eur_lhs along a survival trajectory."""
    times = np.asarray(times, dtype=float)
    survival = np.asarray(survival, dtype=float)
    conc = np.empty_like(survival)
    eur = np.empty_like(survival)
    for i, s in enumerate(survival):
        state = bell_xstate(s)
        conc[i] = concurrence_x(state)
        eur[i] = eur_lhs(state)
    leu_vals = leu(conc)
    windows = tuple(witness_windows(times, conc, refine=refine))
    return WitnessTrace(
        times=times, concurrence=conc, leu=leu_vals, eur_lhs=eur, windows=windows
    )
