"""Named scenario runner: trajectories, witness windows, scans, oracle checks.

Every scenario emits deterministic CSV data (12 significant digits), a flat
key=value manifest, a standalone plot script that reads only the emitted
CSVs, and rendered PNG figures.  Identical configurations produce
byte-identical data files; only the manifest carries a timestamp.
"""

from __future__ import annotations

import datetime as _dt
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import report
from .amplitude import amplitude_ode, amplitude_residue, characteristic_cubic, survival_function
from .lindblad import EXCITED, evolve_master
from .nonmarkov import blp_measure, contour_scan
from .quantifiers import WitnessTrace, leu, witness_trace
from .reservoir import ReservoirParams, default_grid
from .zeno import ZenoSchedule, effective_decay_rate, zeno_witness_trace

TRAJECTORY_HEADER = "t, survival, concurrence, leu, eur_lhs"
WINDOWS_HEADER = "window_index, t_start, t_end, min_leu"
CONTOUR_HEADER = "axis1, axis2, N"


class ValidationError(ValueError):
    """Bad scenario name, parameters, or output collision."""


@dataclass(frozen=True)
class ContourSpec:
    axis_names: tuple[str, str] = ("gamma1", "gamma2")
    axis1: tuple[float, float, int] = (0.05, 2.5, 21)
    axis2: tuple[float, float, int] = (0.05, 2.5, 21)

    def axis_values(self) -> tuple[np.ndarray, np.ndarray]:
        a1 = np.linspace(self.axis1[0], self.axis1[1], int(self.axis1[2]))
        a2 = np.linspace(self.axis2[0], self.axis2[1], int(self.axis2[2]))
        return a1, a2


@dataclass
class ScenarioConfig:
    """Everything needed to run one scenario."""

    scenario: str
    outdir: Path = Path("runs")
    param_overrides: dict = field(default_factory=dict)
    t_max: float | None = None
    dt: float | None = None
    zeno_interval: float | None = None
    contour: ContourSpec | None = None
    oracle: bool = False
    workers: int = 1
    force: bool = False


_WS = ReservoirParams(gamma1=1.0, gamma2=1.0, lambda1=5.0, lambda2=5.0)
_WM = ReservoirParams(gamma1=1.0, gamma2=1.0, lambda1=5.0, lambda2=0.01)
_SS = ReservoirParams(gamma1=1.0, gamma2=1.0, lambda1=0.01, lambda2=0.01)

SCENARIOS: dict[str, dict] = {
    # two weak-coupling settings: both lines broad / one broad one narrow
    "fig2a": {
        "kind": "trace",
        "cases": (("weak_weak", _WS), ("weak_strong", _WM)),
        "t_max": 10.0,
        "dt": 0.002,
    },
    # both lines narrow: revival and a second witness window
    "fig2b": {
        "kind": "trace",
        "cases": (("strong_strong", _SS),),
        "t_max": 50.0,
        "dt": 0.02,
    },
    # backflow measure over the two line weights at fixed unit widths
    "fig3": {
        "kind": "contour",
        "base": ReservoirParams(gamma1=1.0, gamma2=1.0, lambda1=1.0, lambda2=1.0),
        "contour": ContourSpec(),
    },
    # measured-pair dynamics: reference, long interval, short interval
    "fig4a": {
        "kind": "zeno",
        "cases": (("strong_strong", _SS),),
        "zeno_interval": None,
        "t_max": 50.0,
        "dt": 0.02,
    },
    "fig4b": {
        "kind": "zeno",
        "cases": (("strong_strong", _SS),),
        "zeno_interval": 10.0,
        "t_max": 100.0,
        "dt": 0.05,
    },
    "fig4c": {
        "kind": "zeno",
        "cases": (("strong_strong", _SS),),
        "zeno_interval": 0.01,
        # horizon matches the stroboscopic reproduction range; the witness
        # window stays open through all of it (see the window summary)
        "t_max": 800.0,
        "dt": 0.2,
    },
    "custom": {"kind": "custom"},
}

PARAM_FIELDS = ("gamma1", "gamma2", "lambda1", "lambda2", "omega0")


@dataclass(frozen=True)
class ResolvedCase:
    label: str
    params: ReservoirParams
    t_max: float
    dt: float | None
    zeno_interval: float | None


@dataclass
class ScenarioResult:
    scenario: str
    files: list[Path]
    summaries: dict


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _apply_overrides(params: ReservoirParams, overrides: dict) -> ReservoirParams:
    known = {k: float(v) for k, v in overrides.items() if k in PARAM_FIELDS}
    unknown = set(overrides) - set(known)
    if unknown:
        raise ValidationError(f"unknown parameter overrides: {sorted(unknown)}")
    try:
        return replace(params, **known)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def resolve_cases(config: ScenarioConfig) -> list[ResolvedCase]:
    spec = SCENARIOS.get(config.scenario)
    if spec is None:
        raise ValidationError(
            f"unknown scenario {config.scenario!r}; choose from {sorted(SCENARIOS)}"
        )
    if spec["kind"] == "contour":
        raise ValidationError("contour scenarios have no trajectory cases")
    if spec["kind"] == "custom":
        missing = [k for k in PARAM_FIELDS[:4] if k not in config.param_overrides]
        if missing:
            raise ValidationError(f"custom scenario requires explicit {missing}")
        base = ReservoirParams(
            gamma1=float(config.param_overrides["gamma1"]),
            gamma2=float(config.param_overrides["gamma2"]),
            lambda1=float(config.param_overrides["lambda1"]),
            lambda2=float(config.param_overrides["lambda2"]),
            omega0=float(config.param_overrides.get("omega0", 0.0)),
        )
        return [
            ResolvedCase(
                label="custom",
                params=base,
                t_max=config.t_max if config.t_max is not None else 20.0,
                dt=config.dt,
                zeno_interval=config.zeno_interval,
            )
        ]

    cases = []
    for label, params in spec["cases"]:
        p = _apply_overrides(params, config.param_overrides)
        t_max = config.t_max if config.t_max is not None else spec["t_max"]
        dt = config.dt if config.dt is not None else spec.get("dt")
        t_interval = (
            config.zeno_interval
            if config.zeno_interval is not None
            else spec.get("zeno_interval")
        )
        if spec["kind"] == "trace":
            t_interval = None
        cases.append(
            ResolvedCase(
                label=label, params=p, t_max=t_max, dt=dt, zeno_interval=t_interval
            )
        )
    return cases


def case_grid(case: ResolvedCase) -> np.ndarray:
    if case.dt is not None:
        n = int(round(case.t_max / case.dt)) + 1
        return np.linspace(0.0, case.t_max, n)
    return default_grid(case.params, case.t_max)


def compute_case_trace(case: ResolvedCase) -> WitnessTrace:
    grid = case_grid(case)
    if case.zeno_interval is not None:
        schedule = ZenoSchedule.for_params(
            case.zeno_interval, case.t_max, case.params
        )
        return zeno_witness_trace(schedule, case.params, grid)
    surv = survival_function(case.params)
    return witness_trace(grid, surv(grid), refine=surv)


def _window_rows(trace: WitnessTrace) -> list[tuple[int, float, float, float]]:
    rows = []
    for i, (t0, t1) in enumerate(trace.windows):
        inside = (trace.times >= t0) & (trace.times <= t1)
        if np.any(inside):
            min_leu = float(np.min(trace.leu[inside]))
        else:
            min_leu = float(leu(np.interp(0.5 * (t0 + t1), trace.times, trace.concurrence)))
        rows.append((i, float(t0), float(t1), min_leu))
    return rows


def _write_text(path: Path, text: str, written: list[Path]):
    path.write_text(text)
    written.append(path)


def _write_csv(path: Path, header: str, rows, written: list[Path]):
    lines = [header]
    for row in rows:
        lines.append(", ".join(_fmt(v) for v in row))
    _write_text(path, "\n".join(lines) + "\n", written)


def _check_collisions(paths: list[Path], force: bool):
    if force:
        return
    existing = [str(p) for p in paths if p.exists()]
    if existing:
        raise ValidationError(
            "refusing to overwrite existing files (use --force): "
            + ", ".join(existing)
        )


def _manifest_lines(config: ScenarioConfig, cases: list[ResolvedCase]) -> list[str]:
    lines = [
        f"scenario = {config.scenario}",
        f"created_utc = {_dt.datetime.now(_dt.timezone.utc).isoformat()}",
        f"workers = {config.workers}",
        "window_time_tol = 0.0001",
        "ode_rtol = 1e-10",
        "csv_significant_digits = 12",
    ]
    for case in cases:
        pre = f"case.{case.label}"
        for name in PARAM_FIELDS:
            lines.append(f"{pre}.{name} = {_fmt(getattr(case.params, name))}")
        lines.append(f"{pre}.t_max = {_fmt(case.t_max)}")
        if case.dt is not None:
            lines.append(f"{pre}.dt = {_fmt(case.dt)}")
        if case.zeno_interval is not None:
            lines.append(f"{pre}.zeno_interval = {_fmt(case.zeno_interval)}")
    return lines


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    """Run one named scenario and emit its data, script, manifest and figures.

    Raises ValidationError for unknown scenarios, bad parameters or output
    collisions.  Partial outputs are removed if the run fails midway.
    """
    spec = SCENARIOS.get(config.scenario)
    if spec is None:
        raise ValidationError(
            f"unknown scenario {config.scenario!r}; choose from {sorted(SCENARIOS)}"
        )
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    written: list[Path] = []
    try:
        if spec["kind"] == "contour":
            result = _run_contour(config, spec, outdir, written)
        else:
            result = _run_traces(config, outdir, written)
    except Exception:
        for p in written:
            try:
                p.unlink()
            except OSError:
                pass
        raise
    return result


def _run_traces(config: ScenarioConfig, outdir: Path, written: list[Path]) -> ScenarioResult:
    cases = resolve_cases(config)
    name = config.scenario
    planned = [outdir / f"{name}_manifest.txt", outdir / f"{name}_plot.py",
               outdir / f"{name}.png"]
    for case in cases:
        planned.append(outdir / f"{name}_{case.label}_trajectory.csv")
        planned.append(outdir / f"{name}_{case.label}_windows.csv")
    _check_collisions(planned, config.force)

    summaries: dict = {"cases": {}}
    traces: list[tuple[str, WitnessTrace]] = []
    manifest = _manifest_lines(config, cases)
    for case in cases:
        trace = compute_case_trace(case)
        traces.append((case.label, trace))
        rows = zip(trace.times, trace.concurrence, trace.concurrence,
                   trace.leu, trace.eur_lhs)
        # survival equals concurrence for this initial state; emit both columns
        _write_csv(
            outdir / f"{name}_{case.label}_trajectory.csv",
            TRAJECTORY_HEADER,
            rows,
            written,
        )
        win_rows = _window_rows(trace)
        _write_csv(
            outdir / f"{name}_{case.label}_windows.csv",
            WINDOWS_HEADER,
            win_rows,
            written,
        )
        open_at_end = bool(
            trace.windows and trace.windows[-1][1] >= trace.times[-1] - 1e-9
        )
        summaries["cases"][case.label] = {
            "windows": list(trace.windows),
            "window_open_at_horizon": open_at_end,
        }
        manifest.append(f"case.{case.label}.n_windows = {len(trace.windows)}")
        for i, (t0, t1) in enumerate(trace.windows):
            manifest.append(f"case.{case.label}.window{i} = {_fmt(t0)} .. {_fmt(t1)}")
        manifest.append(
            f"case.{case.label}.window_open_at_horizon = {str(open_at_end).lower()}"
        )
        if case.zeno_interval is not None:
            rate = effective_decay_rate(case.zeno_interval, case.params)
            manifest.append(f"case.{case.label}.effective_rate = {_fmt(rate)}")
            summaries["cases"][case.label]["effective_rate"] = rate

    script = report.trace_plot_script(
        name, [(label, f"{name}_{label}_trajectory.csv") for label, _ in traces]
    )
    _write_text(outdir / f"{name}_plot.py", script, written)
    png = outdir / f"{name}.png"
    report.render_trace_figure(png, traces)
    written.append(png)
    _write_text(outdir / f"{name}_manifest.txt", "\n".join(manifest) + "\n", written)
    return ScenarioResult(scenario=name, files=list(written), summaries=summaries)


def _run_contour(config: ScenarioConfig, spec: dict, outdir: Path,
                 written: list[Path]) -> ScenarioResult:
    name = config.scenario
    contour = config.contour if config.contour is not None else spec["contour"]
    base = _apply_overrides(spec["base"], config.param_overrides)
    planned = [
        outdir / f"{name}_contour.csv",
        outdir / f"{name}_matrix.csv",
        outdir / f"{name}_axis1.csv",
        outdir / f"{name}_axis2.csv",
        outdir / f"{name}_manifest.txt",
        outdir / f"{name}_plot.py",
        outdir / f"{name}.png",
    ]
    _check_collisions(planned, config.force)

    a1, a2 = contour.axis_values()
    matrix, flags = contour_scan(
        a1, a2, base, axis_names=contour.axis_names, workers=config.workers
    )

    long_rows = [
        (v1, v2, matrix[i, j])
        for i, v1 in enumerate(a1)
        for j, v2 in enumerate(a2)
    ]
    _write_csv(outdir / f"{name}_contour.csv", CONTOUR_HEADER, long_rows, written)
    _write_text(
        outdir / f"{name}_matrix.csv",
        "\n".join(", ".join(_fmt(v) for v in row) for row in matrix) + "\n",
        written,
    )
    _write_text(outdir / f"{name}_axis1.csv", "\n".join(_fmt(v) for v in a1) + "\n", written)
    _write_text(outdir / f"{name}_axis2.csv", "\n".join(_fmt(v) for v in a2) + "\n", written)

    manifest = _manifest_lines(config, [])
    manifest.append(f"contour.axis1_name = {contour.axis_names[0]}")
    manifest.append(f"contour.axis2_name = {contour.axis_names[1]}")
    for fname in PARAM_FIELDS:
        manifest.append(f"contour.base.{fname} = {_fmt(getattr(base, fname))}")
    manifest.append(f"contour.cells = {matrix.size}")
    manifest.append(f"contour.unconverged_cells = {int((~flags).sum())}")
    script = report.contour_plot_script(
        name,
        f"{name}_axis1.csv",
        f"{name}_axis2.csv",
        f"{name}_matrix.csv",
        contour.axis_names,
    )
    _write_text(outdir / f"{name}_plot.py", script, written)
    png = outdir / f"{name}.png"
    report.render_contour_figure(png, a1, a2, matrix, contour.axis_names)
    written.append(png)
    _write_text(outdir / f"{name}_manifest.txt", "\n".join(manifest) + "\n", written)
    summaries = {"matrix": matrix, "axis1": a1, "axis2": a2, "converged": flags}
    return ScenarioResult(scenario=name, files=list(written), summaries=summaries)


# ---------------------------------------------------------------------------
# oracle suite


@dataclass(frozen=True)
class OracleCheck:
    name: str
    value: float
    tolerance: float
    status: str           # "pass" | "fail" | "skipped"
    note: str = ""


@dataclass
class OracleReport:
    params: ReservoirParams
    checks: list[OracleCheck]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            if c.status == "skipped":
                out.append(f"{c.name:28s} SKIPPED   {c.note}")
            else:
                out.append(
                    f"{c.name:28s} {c.status.upper():4s}  max_dev={c.value:.3e}  "
                    f"tol={c.tolerance:.0e}"
                )
        return out


def run_oracle_suite(
    params: ReservoirParams | None = None,
    t_max: float = 50.0,
    n_points: int = 501,
) -> OracleReport:
    """Cross-validate the amplitude routes and the conservation bookkeeping.

    Compares the closed-form amplitude against the pseudomode integration and
    the master-equation population, and checks the population balance, trace
    preservation and positivity, each against its module tolerance.
    """
    if params is None:
        params = ReservoirParams(gamma1=1.0, gamma2=1.0, lambda1=5.0, lambda2=5.0)
    grid = np.linspace(0.0, t_max, n_points)
    checks: list[OracleCheck] = []

    cubic = characteristic_cubic(params)
    traj = amplitude_ode(grid, params)
    master = evolve_master(grid, params)
    rho22 = master.states[:, EXCITED, EXCITED].real

    if cubic.degenerate:
        checks.append(
            OracleCheck(
                "residue_vs_ode", math.nan, 1e-8, "skipped",
                "degenerate characteristic roots; closed form not applicable",
            )
        )
        checks.append(
            OracleCheck("residue_vs_lindblad", math.nan, 1e-6, "skipped",
                        "degenerate characteristic roots")
        )
    else:
        m_res = amplitude_residue(grid, params, cubic=cubic)
        dev = float(np.abs(m_res - traj.m1).max())
        checks.append(
            OracleCheck("residue_vs_ode", dev, 1e-8,
                        "pass" if dev < 1e-8 else "fail")
        )
        dev = float(np.abs(np.abs(m_res) ** 2 - rho22).max())
        checks.append(
            OracleCheck("residue_vs_lindblad", dev, 1e-6,
                        "pass" if dev < 1e-6 else "fail")
        )

    dev = float(np.abs(np.abs(traj.m1) ** 2 - rho22).max())
    checks.append(
        OracleCheck("ode_vs_lindblad", dev, 1e-6, "pass" if dev < 1e-6 else "fail")
    )
    dev = float(np.abs(traj.conservation - 1.0).max())
    checks.append(
        OracleCheck("population_conservation", dev, 1e-6,
                    "pass" if dev < 1e-6 else "fail")
    )
    dev = float(np.abs(master.traces - 1.0).max())
    checks.append(
        OracleCheck("lindblad_trace", dev, 1e-10, "pass" if dev < 1e-10 else "fail")
    )
    dev = float(-min(master.min_eigenvalues().min(), 0.0))
    checks.append(
        OracleCheck("lindblad_positivity", dev, 1e-8,
                    "pass" if dev < 1e-8 else "fail")
    )
    return OracleReport(params=params, checks=checks)


# ---------------------------------------------------------------------------
# parameter sweeps


def sweep_values(
    param: str,
    values,
    base_params: ReservoirParams,
    t_max: float = 50.0,
) -> list[tuple[float, float, float, float]]:
    """Rows (value, witness_end, gamma_z, blp_n) for a 1-D parameter sweep.

    ``param`` is one of the four rates, or "T" for the measurement interval
    (which sweeps the stroboscopic protocol at fixed reservoir parameters).
    Entries that do not apply are reported as nan.
    """
    rows = []
    for v in values:
        v = float(v)
        if param == "T":
            rate = effective_decay_rate(v, base_params)
            schedule = ZenoSchedule(interval=v, horizon=max(t_max, v),
                                    effective_rate=rate)
            grid = np.linspace(0.0, schedule.horizon, 201)
            trace = zeno_witness_trace(schedule, base_params, grid)
            end = trace.windows[0][1] if trace.windows else math.nan
            rows.append((v, float(end), float(rate), math.nan))
        elif param in PARAM_FIELDS[:4]:
            p = replace(base_params, **{param: v})
            surv = survival_function(p)
            grid = default_grid(p, t_max)
            trace = witness_trace(grid, surv(grid), refine=surv)
            end = trace.windows[0][1] if trace.windows else math.nan
            n = blp_measure(p).n
            rows.append((v, float(end), math.nan, float(n)))
        else:
            raise ValidationError(
                f"sweep parameter must be one of {PARAM_FIELDS[:4] + ('T',)}, got {param!r}"
            )
    return rows
