"""Command-line front end.

    pseudomode run <scenario> [--config FILE] [--out DIR] [--oracle]
                              [--workers N] [--force]
    pseudomode check [--config FILE]
    pseudomode sweep --param NAME --from A --to B --steps K [options]

Exit codes: 0 success, 1 validation problem, 2 numerical-check failure.
Config files are flat ``key = value`` lines with ``#`` comments.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .reservoir import ReservoirParams
from .scenarios import (
    PARAM_FIELDS,
    ContourSpec,
    ScenarioConfig,
    SCENARIOS,
    ValidationError,
    run_oracle_suite,
    run_scenario,
    sweep_values,
)

_PARAM_KEYS = set(PARAM_FIELDS)
_GRID_KEYS = {"t_max", "dt", "T", "workers"}
_CONTOUR_KEYS = {
    "axis1_name", "axis2_name",
    "axis1_min", "axis1_max", "axis1_steps",
    "axis2_min", "axis2_max", "axis2_steps",
}


def load_config(path: str | Path) -> dict:
    """Parse a flat key = value file; raises ValidationError on bad lines."""
    out: dict = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _PARAM_KEYS | _GRID_KEYS | _CONTOUR_KEYS:
            raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
        if key in ("axis1_name", "axis2_name"):
            out[key] = value
        elif key in ("workers", "axis1_steps", "axis2_steps"):
            out[key] = int(value)
        else:
            out[key] = float(value)
    return out


def _contour_from(cfg: dict) -> ContourSpec | None:
    if not (set(cfg) & _CONTOUR_KEYS):
        return None
    default = ContourSpec()
    return ContourSpec(
        axis_names=(
            cfg.get("axis1_name", default.axis_names[0]),
            cfg.get("axis2_name", default.axis_names[1]),
        ),
        axis1=(
            cfg.get("axis1_min", default.axis1[0]),
            cfg.get("axis1_max", default.axis1[1]),
            int(cfg.get("axis1_steps", default.axis1[2])),
        ),
        axis2=(
            cfg.get("axis2_min", default.axis2[0]),
            cfg.get("axis2_max", default.axis2[1]),
            int(cfg.get("axis2_steps", default.axis2[2])),
        ),
    )


def _params_from(cfg: dict) -> ReservoirParams:
    return ReservoirParams(
        gamma1=cfg.get("gamma1", 1.0),
        gamma2=cfg.get("gamma2", 1.0),
        lambda1=cfg.get("lambda1", 5.0),
        lambda2=cfg.get("lambda2", 5.0),
        omega0=cfg.get("omega0", 0.0),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudomode",
        description="Witness-window, Zeno and backflow scenarios for a "
        "two-level emitter in a two-Lorentzian reservoir.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a named scenario")
    run_p.add_argument("scenario", metavar="scenario",
                       help=f"one of {', '.join(sorted(SCENARIOS))}")
    run_p.add_argument("--config", help="flat key=value settings file")
    run_p.add_argument("--out", help="output directory (default runs/<scenario>)")
    run_p.add_argument("--oracle", action="store_true",
                       help="also run the numerical cross-checks")
    run_p.add_argument("--workers", type=int, default=None)
    run_p.add_argument("--force", action="store_true",
                       help="overwrite existing output files")

    check_p = sub.add_parser("check", help="run the numerical oracle suite")
    check_p.add_argument("--config", help="flat key=value settings file")

    sweep_p = sub.add_parser("sweep", help="sweep one parameter")
    sweep_p.add_argument("--param", required=True,
                         help="gamma1|gamma2|lambda1|lambda2|T")
    sweep_p.add_argument("--from", dest="start", type=float, required=True)
    sweep_p.add_argument("--to", dest="stop", type=float, required=True)
    sweep_p.add_argument("--steps", type=int, required=True)
    sweep_p.add_argument("--config", help="flat key=value settings file")
    sweep_p.add_argument("--out", help="output directory (default runs/sweep)")
    sweep_p.add_argument("--force", action="store_true")
    return parser


def _cmd_run(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    overrides = {k: v for k, v in cfg.items() if k in _PARAM_KEYS}
    config = ScenarioConfig(
        scenario=args.scenario,
        outdir=Path(args.out) if args.out else Path("runs") / args.scenario,
        param_overrides=overrides,
        t_max=cfg.get("t_max"),
        dt=cfg.get("dt"),
        zeno_interval=cfg.get("T"),
        contour=_contour_from(cfg),
        oracle=args.oracle,
        workers=args.workers if args.workers is not None else int(cfg.get("workers", 1)),
        force=args.force,
    )
    result = run_scenario(config)
    for path in result.files:
        print(f"wrote {path}")
    if args.oracle:
        from .scenarios import resolve_cases

        params = (
            resolve_cases(config)[0].params
            if SCENARIOS[args.scenario]["kind"] != "contour"
            else _params_from(cfg)
        )
        rep = run_oracle_suite(params)
        for line in rep.lines():
            print(line)
        if not rep.passed:
            print("oracle suite FAILED", file=sys.stderr)
            return 2
    return 0


def _cmd_check(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    rep = run_oracle_suite(_params_from(cfg))
    for line in rep.lines():
        print(line)
    if not rep.passed:
        print("oracle suite FAILED", file=sys.stderr)
        return 2
    print("oracle suite passed")
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    base = _params_from(cfg)
    if args.steps < 1:
        raise ValidationError("--steps must be at least 1")
    values = np.linspace(args.start, args.stop, args.steps)
    rows = sweep_values(args.param, values, base, t_max=cfg.get("t_max", 50.0))
    outdir = Path(args.out) if args.out else Path("runs") / "sweep"
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"sweep_{args.param}.csv"
    if path.exists() and not args.force:
        raise ValidationError(f"refusing to overwrite {path} (use --force)")
    lines = ["value, witness_end, gamma_z, blp_n"]
    for row in rows:
        lines.append(", ".join(f"{v:.12g}" for v in row))
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    parser.error(f"unknown command {args.command!r}")
    return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
