"""Independent master-equation route for the emitter + two lossy pseudomodes.

The one-excitation sector plus the shared vacuum closes a four-level space,
ordered |g,0,0>, |e,0,0>, |g,1,0>, |g,0,1>.  Evolving the Lindblad equation

    drho/dt = -i[H, rho] - sum_j lambda_j (Pj'Pj rho - 2 Pj rho Pj' + rho Pj'Pj)

on that space must reproduce |M(t)|^2 from the amplitude solvers in the
excited-state population, which is what makes this module a useful oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .amplitude import IntegrationError
from .reservoir import ReservoirParams

DIM = 4
GROUND, EXCITED, MODE1, MODE2 = range(DIM)

_HERMITICITY_TOL = 1e-12
_TRACE_TOL = 1e-10
_POSITIVITY_TOL = 1e-10


def basis_state(index: int) -> np.ndarray:
    """Projector |index><index| in the four-level basis."""
    rho = np.zeros((DIM, DIM), dtype=complex)
    rho[index, index] = 1.0
    return rho


def validate_state(rho: np.ndarray, positivity_tol: float = _POSITIVITY_TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity of a four-level state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"state must be {DIM}x{DIM}")
    if np.abs(rho - rho.conj().T).max() > _HERMITICITY_TOL:
        raise ValueError("state must be Hermitian")
    if abs(np.trace(rho).real - 1.0) > _TRACE_TOL:
        raise ValueError("state must have unit trace")
    if np.linalg.eigvalsh(rho).min() < -positivity_tol:
        raise ValueError("state must be positive semidefinite")
    return rho


def _operators(params: ReservoirParams):
    h = np.zeros((DIM, DIM), dtype=complex)
    h[EXCITED, MODE1] = h[MODE1, EXCITED] = params.g1
    h[EXCITED, MODE2] = h[MODE2, EXCITED] = params.g2
    p1 = np.zeros((DIM, DIM), dtype=complex)
    p1[GROUND, MODE1] = 1.0
    p2 = np.zeros((DIM, DIM), dtype=complex)
    p2[GROUND, MODE2] = 1.0
    return h, p1, p2


class LindbladGenerator:
    """The dissipative generator as both a callable map and a flat matrix."""

    def __init__(self, params: ReservoirParams):
        self.params = params
        h, p1, p2 = _operators(params)
        eye = np.eye(DIM, dtype=complex)
        mat = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
        for lam, p in ((params.lambda1, p1), (params.lambda2, p2)):
            pdp = p.conj().T @ p
            mat += lam * (
                2.0 * np.kron(p, p.conj())
                - np.kron(pdp, eye)
                - np.kron(eye, pdp.T)
            )
        # row-major vec convention: vec(A rho B) = (A kron B^T) vec(rho)
        self.matrix = mat
        self.hamiltonian = h
        self.jump_operators = ((params.lambda1, p1), (params.lambda2, p2))

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        return (self.matrix @ rho.reshape(-1)).reshape(DIM, DIM)


def lindblad_generator(params: ReservoirParams) -> LindbladGenerator:
    """Build the trace-annihilating generator for the four-level problem."""
    return LindbladGenerator(params)


@dataclass(frozen=True)
class MasterTrajectory:
    """Density matrices rho(t) on a grid, with convenience views."""

    times: np.ndarray
    states: np.ndarray  # shape (n_times, 4, 4)

    @property
    def excited_population(self) -> np.ndarray:
        return self.states[:, EXCITED, EXCITED].real

    @property
    def traces(self) -> np.ndarray:
        return np.trace(self.states, axis1=1, axis2=2).real

    def min_eigenvalues(self) -> np.ndarray:
        return np.array([np.linalg.eigvalsh(s).min() for s in self.states])


def evolve_master(
    grid,
    params: ReservoirParams,
    initial: np.ndarray | None = None,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> MasterTrajectory:
    """Adaptively integrate the master equation over the given time grid.

    ``initial`` defaults to the excited emitter with both modes empty.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be 1-D and strictly increasing")
    if initial is None:
        initial = basis_state(EXCITED)
    rho0 = validate_state(initial)
    gen = lindblad_generator(params)
    mat = gen.matrix

    sol = solve_ivp(
        lambda _t, y: mat @ y,
        (grid[0], grid[-1]),
        rho0.reshape(-1),
        method="DOP853",
        t_eval=grid,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        t_fail = sol.t[-1] if sol.t.size else grid[0]
        raise IntegrationError(
            f"master-equation integration failed near t = {t_fail:.6g}: {sol.message}"
        )
    states = sol.y.T.reshape(-1, DIM, DIM)
    # re-symmetrize rounding dust so downstream eigvalsh sees Hermitian input
    states = 0.5 * (states + np.conj(np.swapaxes(states, 1, 2)))
    return MasterTrajectory(times=grid, states=states)
