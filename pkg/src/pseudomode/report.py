"""Figure rendering for scenario runs, kept apart from the numerical core.

PNG files are drawn with matplotlib (Agg backend, safe for headless runs);
alongside them each scenario gets a small standalone script that rebuilds the
same figure from nothing but the emitted CSV files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_COLORS = ("tab:red", "tab:blue", "tab:green", "tab:orange")


def render_trace_figure(path: Path, traces) -> None:
    """Concurrence (dashed) and entropic bound (solid) for each labeled trace."""
    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    for color, (label, trace) in zip(_COLORS, traces):
        ax.plot(trace.times, trace.leu, color=color, lw=1.6, label=f"LEU, {label}")
        ax.plot(trace.times, trace.concurrence, color=color, lw=1.4, ls="--",
                label=f"C, {label}")
        for t0, t1 in trace.windows:
            ax.axvspan(t0, t1, color=color, alpha=0.08, lw=0)
    ax.axhline(1.0, color="k", lw=0.8, ls=":")
    ax.set_xlabel("time (units of 1/gamma1)")
    ax.set_ylabel("concurrence / uncertainty bound (bits)")
    ax.set_ylim(bottom=0.0)
    ax.legend(fontsize=8, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_contour_figure(path: Path, axis1, axis2, matrix, axis_names) -> None:
    """Filled map of the backflow measure over the scanned parameter plane."""
    fig, ax = plt.subplots(figsize=(5.6, 4.6))
    mesh = ax.pcolormesh(
        np.asarray(axis2), np.asarray(axis1), np.asarray(matrix),
        shading="nearest", cmap="inferno",
    )
    fig.colorbar(mesh, ax=ax, label="backflow measure N")
    ax.set_xlabel(axis_names[1])
    ax.set_ylabel(axis_names[0])
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def trace_plot_script(scenario: str, cases: list[tuple[str, str]]) -> str:
    """Standalone matplotlib script that replots a trace scenario from CSV."""
    case_list = ",\n    ".join(f'("{label}", "{fname}")' for label, fname in cases)
    return f'''#!/usr/bin/env python3
"""Replot {scenario} from the CSV files emitted next to this script."""
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

CASES = [
    {case_list},
]

fig, ax = plt.subplots(figsize=(7.0, 4.4))
for label, fname in CASES:
    data = np.genfromtxt(fname, delimiter=",", names=True)
    ax.plot(data["t"], data["leu"], lw=1.6, label=f"LEU, {{label}}")
    ax.plot(data["t"], data["concurrence"], lw=1.4, ls="--", label=f"C, {{label}}")
ax.axhline(1.0, color="k", lw=0.8, ls=":")
ax.set_xlabel("time (units of 1/gamma1)")
ax.set_ylabel("concurrence / uncertainty bound (bits)")
ax.set_ylim(bottom=0.0)
ax.legend(fontsize=8, ncol=2)
fig.tight_layout()
fig.savefig("{scenario}_replot.png", dpi=150)
print("wrote {scenario}_replot.png")
'''


def contour_plot_script(
    scenario: str, axis1_file: str, axis2_file: str, matrix_file: str, axis_names
) -> str:
    """Standalone matplotlib script that replots a contour scenario from CSV."""
    return f'''#!/usr/bin/env python3
"""Replot {scenario} from the CSV files emitted next to this script."""
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

axis1 = np.loadtxt("{axis1_file}", delimiter=",")
axis2 = np.loadtxt("{axis2_file}", delimiter=",")
matrix = np.loadtxt("{matrix_file}", delimiter=",")

fig, ax = plt.subplots(figsize=(5.6, 4.6))
mesh = ax.pcolormesh(axis2, axis1, matrix, shading="nearest", cmap="inferno")
fig.colorbar(mesh, ax=ax, label="backflow measure N")
ax.set_xlabel("{axis_names[1]}")
ax.set_ylabel("{axis_names[0]}")
fig.tight_layout()
fig.savefig("{scenario}_replot.png", dpi=150)
print("wrote {scenario}_replot.png")
'''
