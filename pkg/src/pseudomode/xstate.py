"""Two-qubit state of two identical, non-interacting emitter+reservoir pairs.

For the symmetric one-excitation Bell state (|eg> + |ge>)/sqrt(2), local
amplitude damping keeps the joint state in X form with every element fixed by
the single-emitter survival probability.  Basis ordering throughout:
|ee>, |eg>, |ge>, |gg>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_TOL = 1e-12


def single_atom_density(m1: complex, m0: complex) -> np.ndarray:
    """2x2 emitter density matrix from the pure-state amplitudes (m1, m0).

    [[|m1|^2, m1*conj(m0)], [m0*conj(m1), 1-|m1|^2]]; the ground population
    includes whatever has leaked to the reservoir.
    """
    m1 = complex(m1)
    m0 = complex(m0)
    norm = abs(m1) ** 2 + abs(m0) ** 2
    if norm > 1.0 + 1e-9:
        raise ValueError(f"|m0|^2 + |m1|^2 = {norm:.12g} exceeds 1")
    p = abs(m1) ** 2
    return np.array(
        [[p, m1 * m0.conjugate()], [m0 * m1.conjugate(), 1.0 - p]],
        dtype=complex,
    )


@dataclass(frozen=True)
class XStateDensity:
    """Two-qubit density matrix with population only on the X skeleton.

    For this model rho11 (the |ee> population) is identically zero; it is
    stored anyway so consumers always see the full 4x4 matrix.
    """

    rho22: float
    rho33: float
    rho44: float
    rho23: complex
    rho11: float = 0.0

    def __post_init__(self):
        pops = (self.rho11, self.rho22, self.rho33, self.rho44)
        for v in pops:
            if v < -_TOL or v > 1.0 + _TOL:
                raise ValueError(f"population {v!r} outside [0, 1]")
        total = sum(pops)
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"populations sum to {total!r}, not 1")
        if abs(self.rho23) ** 2 > self.rho22 * self.rho33 + 1e-10:
            raise ValueError("coherence violates positivity: |rho23|^2 > rho22*rho33")

    def to_matrix(self) -> np.ndarray:
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = self.rho11
        rho[1, 1] = self.rho22
        rho[2, 2] = self.rho33
        rho[3, 3] = self.rho44
        rho[1, 2] = self.rho23
        rho[2, 1] = np.conjugate(self.rho23)
        return rho


def bell_xstate(survival: float) -> XStateDensity:
    """X state reached from (|eg>+|ge>)/sqrt(2) at survival probability s.

    rho22 = rho33 = rho23 = s/2 and rho44 = 1 - s.
    """
    s = float(survival)
    if s < -_TOL or s > 1.0 + _TOL:
        raise ValueError(f"survival must lie in [0, 1], got {s!r}")
    s = min(max(s, 0.0), 1.0)
    return XStateDensity(rho22=s / 2.0, rho33=s / 2.0, rho44=1.0 - s, rho23=s / 2.0)


def damping_kraus(m1: complex) -> tuple[np.ndarray, np.ndarray]:
    """Single-qubit amplitude-damping Kraus pair for emitter amplitude m1."""
    p = abs(m1) ** 2
    if p > 1.0 + 1e-9:
        raise ValueError("|m1| must not exceed 1")
    k0 = np.array([[m1, 0.0], [0.0, 1.0]], dtype=complex)
    k1 = np.array([[0.0, 0.0], [np.sqrt(max(1.0 - p, 0.0)), 0.0]], dtype=complex)
    return k0, k1
