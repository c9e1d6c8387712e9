"""Static SVG figures of a run: time histories and the planar paths."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402

from .engine import StepRecord

# (file stem, record attribute, y-axis label, title)
_SERIES = [
    ("x", "x", "x [m]", "Evolution of the x coordinates of agents"),
    ("y", "y", "y [m]", "Evolution of the y coordinates of agents"),
    ("theta", "theta", r"$\theta$ [rad]", "Evolution of the heading angles"),
    ("u", "u", "u [rad/s]", "Evolution of the angular speeds"),
    ("v", "v", "v [m/s]", "Evolution of the linear speeds"),
]


def emit_plots(records: Sequence[StepRecord], out_dir, obstacles=()) -> list[Path]:
    """Write the seven figures to `out_dir` and return their paths.

    `obstacles` is a sequence of ``(cx, cy, radius)`` drawn on the planar plot.
    """
    if not records:
        raise ValueError("no records")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t = [r.t for r in records]
    ids = [a.id for a in records[0].agents]
    paths = []

    for stem, attr, ylabel, title in _SERIES:
        fig, ax = plt.subplots(figsize=(6, 3.5))
        for j, aid in enumerate(ids):
            ax.plot(t, [getattr(r.agents[j], attr) for r in records], lw=1, label=f"agent {aid}")
        ax.set_xlabel("t [s]")
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.grid(alpha=0.3)
        if len(ids) <= 12:
            ax.legend(fontsize=6, ncol=3)
        paths.append(_save(fig, out / f"{stem}.svg"))

    fig, ax = plt.subplots(figsize=(6, 3.5))
    d_min = [r.d_min for r in records]
    ax.plot(t, d_min, lw=1)
    lowest = min(d_min)
    ax.axhline(lowest, ls="--", lw=0.8, color="0.5", gid="d_min_floor")
    ax.annotate(f"min {lowest:.6g} m", (t[d_min.index(lowest)], lowest),
                textcoords="offset points", xytext=(4, 4), fontsize=7)
    ax.set_xlabel("t [s]")
    ax.set_ylabel(r"$d_{min}$ [m]")
    ax.set_title("Evolution of the minimum distance among agents")
    ax.grid(alpha=0.3)
    paths.append(_save(fig, out / "d_min.svg"))

    fig, ax = plt.subplots(figsize=(6, 6))
    for j, aid in enumerate(ids):
        xs = [r.agents[j].x for r in records]
        ys = [r.agents[j].y for r in records]
        (line,) = ax.plot(xs, ys, lw=1, label=f"agent {aid}")
        ax.plot(xs[0], ys[0], "o", ms=3, color=line.get_color())
    for k, (cx, cy, rad) in enumerate(obstacles):
        ax.add_patch(Circle((cx, cy), rad, color="0.4", alpha=0.5, gid=f"obstacle_{k}"))
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title("Evolution of the agents")
    ax.grid(alpha=0.3)
    paths.append(_save(fig, out / "trajectories.svg"))
    return paths


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    # fixed hash salt and no date keep the SVG bytes reproducible
    with plt.rc_context({"svg.hashsalt": "unicycle-formation"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
