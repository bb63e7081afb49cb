"""Pseudomode dynamics of a two-level emitter in a double-Lorentzian reservoir.

The package solves the emitter amplitude by residue inversion and by direct
pseudomode integration, lifts it to the two-qubit X state of two identical
non-interacting emitters, and evaluates concurrence, the entropic-uncertainty
witness, stroboscopic (Zeno) protection and the trace-distance backflow
measure, with a scenario CLI on top.
"""

from .amplitude import (
    AmplitudeTrajectory,
    CubicSolution,
    DegenerateRootsError,
    IntegrationError,
    amplitude_derivative,
    amplitude_ode,
    amplitude_residue,
    characteristic_cubic,
    survival_function,
)
from .lindblad import (
    EXCITED,
    GROUND,
    MODE1,
    MODE2,
    MasterTrajectory,
    basis_state,
    evolve_master,
    lindblad_generator,
)
from .nonmarkov import NonMarkovResult, blp_measure, contour_scan, trace_distance
from .quantifiers import (
    WitnessTrace,
    concurrence_wootters,
    concurrence_x,
    eur_lhs,
    leu,
    von_neumann_entropy,
    witness_threshold,
    witness_trace,
    witness_windows,
)
from .reservoir import ReservoirParams, correlation_kernel, default_grid, spectral_density
from .scenarios import (
    ContourSpec,
    OracleReport,
    ScenarioConfig,
    ScenarioResult,
    ValidationError,
    run_oracle_suite,
    run_scenario,
    sweep_values,
)
from .xstate import XStateDensity, bell_xstate, damping_kraus, single_atom_density
from .zeno import (
    SaturatedRateWarning,
    ZenoSchedule,
    effective_decay_rate,
    zeno_concurrence,
    zeno_witness_trace,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeTrajectory",
    "ContourSpec",
    "CubicSolution",
    "DegenerateRootsError",
    "EXCITED",
    "GROUND",
    "IntegrationError",
    "MODE1",
    "MODE2",
    "MasterTrajectory",
    "NonMarkovResult",
    "OracleReport",
    "ReservoirParams",
    "SaturatedRateWarning",
    "ScenarioConfig",
    "ScenarioResult",
    "ValidationError",
    "WitnessTrace",
    "XStateDensity",
    "ZenoSchedule",
    "amplitude_derivative",
    "amplitude_ode",
    "amplitude_residue",
    "basis_state",
    "bell_xstate",
    "blp_measure",
    "characteristic_cubic",
    "concurrence_wootters",
    "concurrence_x",
    "contour_scan",
    "correlation_kernel",
    "damping_kraus",
    "default_grid",
    "effective_decay_rate",
    "eur_lhs",
    "evolve_master",
    "leu",
    "lindblad_generator",
    "run_oracle_suite",
    "run_scenario",
    "single_atom_density",
    "spectral_density",
    "survival_function",
    "sweep_values",
    "trace_distance",
    "von_neumann_entropy",
    "witness_threshold",
    "witness_trace",
    "witness_windows",
    "zeno_concurrence",
    "zeno_witness_trace",
]
