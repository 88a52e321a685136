"""Figure renderers for the simulation suite's CSV/JSON outputs.

Each renderer validates its inputs against the documented schemas, draws a
multi-panel matplotlib figure, and writes one image file.  Rendering is
read-only on the inputs, and output bytes are deterministic for fixed inputs
(fixed SVG hash salt, no embedded timestamps).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import schemas
from .schemas import load_table

plt.rcParams["svg.hashsalt"] = "epfigures"


class FigureId(enum.Enum):
    F1 = "F1"
    F3 = "F3"
    F4 = "F4"
    F5 = "F5"
    F6 = "F6"


@dataclass(frozen=True)
class FigureSpec:
    """What to render: figure id, directory of inputs, output image path.

    style keys (all optional): ``shaded_breakdown_windows`` (bool, F1),
    ``ep_markers`` (float kappa, F5), ``line_labels`` (bool).
    """

    figure_id: FigureId
    input_dir: Path
    output_file: Path
    style: dict = field(default_factory=dict)


def _save(fig, output_file: Path) -> None:
    output_file = Path(output_file)
    output_file.parent.mkdir(parents=True, exist_ok=True)
    kwargs = {}
    if output_file.suffix.lower() == ".svg":
        kwargs["metadata"] = {"Date": None}
    fig.savefig(output_file, **kwargs)
    plt.close(fig)


def _shade_exceedance(ax, t, a, threshold=1.0):
    """Shade contiguous regions where a(t) > threshold."""
    above = a > threshold
    if not np.any(above):
        return
    edges = np.flatnonzero(np.diff(above.astype(int)))
    starts = list(np.flatnonzero(np.diff(above.astype(int)) == 1) + 1)
    stops = list(np.flatnonzero(np.diff(above.astype(int)) == -1) + 1)
    if above[0]:
        starts.insert(0, 0)
    if above[-1]:
        stops.append(len(a))
    del edges
    for lo, hi in zip(starts, stops):
        ax.axvspan(t[lo], t[max(lo, hi - 1)], color="0.85", zorder=0)


def render_f1(spec: FigureSpec) -> Path:
    """Adiabaticity traces per direction with shaded breakdown windows,
    plus max[a_nm] over the loop period."""
    d = spec.input_dir
    traces = {
        direction: load_table(d / f"adiabaticity_{direction}.csv", schemas.ADIABATICITY)
        for direction in ("cw", "ccw")
    }
    sweep = load_table(d / "adiabaticity_sweep.csv", schemas.ADIABATICITY_SWEEP)

    fig, axes = plt.subplots(1, 3, figsize=(11, 3.2), constrained_layout=True)
    shade = spec.style.get("shaded_breakdown_windows", True)
    for ax, (direction, tab) in zip(axes[:2], traces.items()):
        t = tab["t"] / tab["t"][-1]
        ax.plot(t, tab["a_pm"], label=r"$a_{+-}$")
        ax.plot(t, tab["a_mp"], label=r"$a_{-+}$")
        if shade:
            _shade_exceedance(ax, t, np.maximum(tab["a_pm"], tab["a_mp"]))
        ax.axhline(1.0, color="k", lw=0.6, ls=":")
        ax.set_yscale("log")
        ax.set_xlabel("t / T")
        ax.set_title(direction)
        if spec.style.get("line_labels", True):
            ax.legend(fontsize=8)
    axes[0].set_ylabel(r"$a_{nm}$")

    ax = axes[2]
    for direction, marker in (("cw", "o"), ("ccw", "s")):
        sel = sweep["direction"] == direction
        order = np.argsort(sweep["T"][sel])
        ax.plot(sweep["T"][sel][order], sweep["maxA"][sel][order],
                marker=marker, ms=3, lw=1, label=direction)
    ax.axhline(1.0, color="k", lw=0.6, ls=":")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(r"T ($\mu$s)")
    ax.set_ylabel(r"max$_t\,a_{nm}$")
    ax.legend(fontsize=8)
    _save(fig, spec.output_file)
    return spec.output_file


def render_f3(spec: FigureSpec) -> Path:
    """Loop trajectories: solid propagated Bloch components overlaid with
    dashed instantaneous-eigenstate references, per direction and drive mode."""
    d = spec.input_dir
    modes = ("none", "hermitian", "full")
    fig, axes = plt.subplots(2, 3, figsize=(11, 6), sharex=True, sharey=True,
                             constrained_layout=True)
    for i, direction in enumerate(("cw", "ccw")):
        for j, mode in enumerate(modes):
            tab = load_table(d / f"encircle_{direction}_{mode}.csv", schemas.TRAJECTORY)
            ax = axes[i, j]
            t = tab["t"] / tab["t"][-1]
            for comp, color in (("x", "C0"), ("y", "C1"), ("z", "C2")):
                ax.plot(t, tab[comp], color=color, lw=1.2,
                        label=comp if spec.style.get("line_labels", True) else None)
                ax.plot(t, tab[f"{comp}_I"], color=color, lw=1.0, ls="--")
            ax.set_title(f"{direction}, CD: {mode}", fontsize=9)
            ax.set_ylim(-1.1, 1.1)
            if i == 1:
                ax.set_xlabel("t / T")
            if j == 0:
                ax.set_ylabel("Bloch components")
    axes[0, 0].legend(fontsize=8, loc="lower left")
    _save(fig, spec.output_file)
    return spec.output_file


def render_f4(spec: FigureSpec) -> Path:
    """Loop-averaged trace distance and max adiabaticity parameter vs period."""
    tab = load_table(spec.input_dir / "period_sweep.csv", schemas.PERIOD_SWEEP)
    fig, (ax_d, ax_a) = plt.subplots(1, 2, figsize=(8.5, 3.4), constrained_layout=True)
    for direction, marker in (("cw", "o"), ("ccw", "s")):
        for mode, color in (("none", "C3"), ("hermitian", "C0"), ("full", "C2")):
            sel = (tab["direction"] == direction) & (tab["cdMode"] == mode)
            if not np.any(sel):
                continue
            order = np.argsort(tab["T"][sel])
            T = tab["T"][sel][order]
            ax_d.plot(T, tab["Dbar"][sel][order], color=color, marker=marker,
                      ms=3, lw=1, label=f"{direction}, {mode}")
            ax_a.plot(T, tab["maxA"][sel][order], color=color, marker=marker, ms=3, lw=1)
    ax_d.set_xscale("log")
    ax_d.set_xlabel(r"T ($\mu$s)")
    ax_d.set_ylabel(r"$\bar{D}$")
    if spec.style.get("line_labels", True):
        ax_d.legend(fontsize=7)
    ax_a.set_xscale("log")
    ax_a.set_yscale("log")
    ax_a.axhline(1.0, color="k", lw=0.6, ls=":")
    ax_a.set_xlabel(r"T ($\mu$s)")
    ax_a.set_ylabel(r"max$_t\,a_{nm}$")
    _save(fig, spec.output_file)
    return spec.output_file


def render_f5(spec: FigureSpec) -> Path:
    """Endpoint x(T) vs the loop's inner coupling, with vertical EP markers."""
    tab = load_table(spec.input_dir / "topology_scan.csv", schemas.TOPOLOGY)
    fig, ax = plt.subplots(figsize=(5.2, 3.4), constrained_layout=True)
    order = np.argsort(tab["jMin"])
    ax.plot(tab["jMin"][order], tab["xT_cd"][order], "o-", ms=3, lw=1, label="with CD")
    ax.plot(tab["jMin"][order], tab["xT_nocd"][order], "s--", ms=3, lw=1,
            color="0.5", label="no CD")
    kappa = spec.style.get("ep_markers")
    if kappa is not None:
        for j_ep in (-kappa, kappa):
            ax.axvline(j_ep, color="C3", lw=0.8, ls=":")
    ax.set_xlabel(r"$J_{min}$ (rad/$\mu$s)")
    ax.set_ylabel(r"$x(T)$")
    ax.set_ylim(-1.2, 1.2)
    if spec.style.get("line_labels", True):
        ax.legend(fontsize=8)
    _save(fig, spec.output_file)
    return spec.output_file


def render_f6(spec: FigureSpec) -> Path:
    """Counterdiabatic drive components for the deviating loop plus the
    trace-distance cost of dropping the anti-Hermitian part."""
    d = spec.input_dir
    drive = load_table(d / "apollonius_drive_ellipse.csv", schemas.DRIVE)
    herm = load_table(d / "apollonius_ellipse_hermitian.csv", schemas.TRAJECTORY)
    full = load_table(d / "apollonius_ellipse_full.csv", schemas.TRAJECTORY)

    fig, (ax_re, ax_im, ax_d) = plt.subplots(3, 1, figsize=(5.2, 6.5),
                                             sharex=True, constrained_layout=True)
    t = drive["t"] / drive["t"][-1]
    ax_re.plot(t, drive["ReJcd"], color="C0")
    ax_re.set_ylabel(r"Re $J_{CD}$ (rad/$\mu$s)")
    ax_im.plot(t, drive["ImJcd"], color="C1")
    ax_im.set_ylabel(r"Im $J_{CD}$ (rad/$\mu$s)")
    for tab, label, color in ((herm, "Hermitian CD", "C3"), (full, "full CD", "C2")):
        ax_d.plot(tab["t"] / tab["t"][-1], tab["D"], color=color, label=label)
    ax_d.set_xlabel("t / T")
    ax_d.set_ylabel("D(t)")
    if spec.style.get("line_labels", True):
        ax_d.legend(fontsize=8)
    _save(fig, spec.output_file)
    return spec.output_file


_RENDERERS = {
    FigureId.F1: render_f1,
    FigureId.F3: render_f3,
    FigureId.F4: render_f4,
    FigureId.F5: render_f5,
    FigureId.F6: render_f6,
}


def render_figure(spec: FigureSpec) -> Path:
    """Validate inputs and write the requested figure's image file."""
    return _RENDERERS[spec.figure_id](spec)
