"""Trajectory CSV and metrics summary serialization.

Trajectory files start with ``#`` metadata lines (JSON values) followed by a
CSV table: one header row, then one row per step with columns ``t``, then
``x_i, y_i, theta_i, v_i, u_i, mode_i`` for every agent in id order, then
``V_a, d_min, clearance``. Numbers use 9 significant digits (``%.9g``).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .engine import AgentRecord, RunMetrics, StepRecord
from .supervisor import FormationSpec, Mode, reference

MAGIC = "# unicycle-formation trajectory v1"
AGENT_FIELDS = ("x", "y", "theta", "v", "u", "mode")


def fmt(value: float) -> str:
    return f"{value:.9g}"


@dataclass
class Trajectory:
    records: list[StepRecord]
    formation: FormationSpec
    V_m: float
    tol_conv: float
    name: str = ""
    obstacles: list = field(default_factory=list)


def formation_to_json(f: FormationSpec) -> dict:
    if f.kind == "affine":
        return {"kind": "affine", "velocity": list(f.velocity),
                "offsets": {str(k): list(v) for k, v in sorted(f.offsets.items())}}
    return {"kind": "circular", "center": list(f.center), "radius": f.radius,
            "rate": f.rate, "phases": {str(k): v for k, v in sorted(f.phases.items())}}


def formation_from_json(d: dict) -> FormationSpec:
    if d["kind"] == "affine":
        return FormationSpec("affine", velocity=tuple(d["velocity"]),
                             offsets={int(k): tuple(v) for k, v in d["offsets"].items()})
    return FormationSpec("circular", center=tuple(d["center"]), radius=d["radius"],
                         rate=d["rate"], phases={int(k): v for k, v in d["phases"].items()})


def header_row(agent_ids: Sequence[int]) -> list[str]:
    cols = ["t"]
    for i in agent_ids:
        cols += [f"{name}_{i}" for name in AGENT_FIELDS]
    return cols + ["V_a", "d_min", "clearance"]


def format_trajectory(
    records: Sequence[StepRecord],
    formation: FormationSpec,
    V_m: float,
    tol_conv: float,
    name: str = "",
    obstacles: Sequence[tuple[float, float, float]] = (),
) -> str:
    if not records:
        raise ValueError("no records")
    buf = io.StringIO()
    buf.write(MAGIC + "\n")
    buf.write(f"# name: {json.dumps(name)}\n")
    buf.write(f"# V_m: {json.dumps(V_m)}\n")
    buf.write(f"# tol_conv: {json.dumps(tol_conv)}\n")
    buf.write(f"# obstacles: {json.dumps([list(o) for o in obstacles])}\n")
    buf.write(f"# formation: {json.dumps(formation_to_json(formation), sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header_row([a.id for a in records[0].agents]))
    for rec in records:
        row = [fmt(rec.t)]
        for a in rec.agents:
            row += [fmt(a.x), fmt(a.y), fmt(a.theta), fmt(a.v), fmt(a.u), a.mode.value]
        row += [fmt(rec.V_a), fmt(rec.d_min), fmt(rec.clearance)]
        w.writerow(row)
    return buf.getvalue()


def write_trajectory(path, records, formation, V_m, tol_conv, name="", obstacles=()) -> None:
    Path(path).write_text(
        format_trajectory(records, formation, V_m, tol_conv, name, obstacles)
    )


def parse_trajectory(text: str) -> Trajectory:
    """Read a trajectory document back into records.

    Tracking errors are recomputed from the stored positions and the embedded
    formation, so they carry the file's 9-digit precision.
    """
    lines = text.splitlines()
    if not lines or lines[0] != MAGIC:
        raise ValueError("not a unicycle-formation trajectory file")
    meta = {}
    k = 1
    while k < len(lines) and lines[k].startswith("#"):
        key, _, value = lines[k][1:].partition(":")
        meta[key.strip()] = json.loads(value)
        k += 1
    formation = formation_from_json(meta["formation"])
    rows = list(csv.reader(lines[k:]))
    header, body = rows[0], rows[1:]
    n_agents = (len(header) - 4) // len(AGENT_FIELDS)
    ids = [int(header[1 + j * 6].split("_", 1)[1]) for j in range(n_agents)]
    if header != header_row(ids):
        raise ValueError("unexpected trajectory columns")
    records = []
    for row in body:
        t = float(row[0])
        agents = []
        for j, aid in enumerate(ids):
            x, y, th, v, u = (float(c) for c in row[1 + 6 * j : 6 + 6 * j])
            mode = Mode(row[6 + 6 * j])
            ref, _ = reference(formation, aid, t)
            e = math.sqrt((x - ref.x) ** 2 + (y - ref.y) ** 2)
            agents.append(AgentRecord(aid, x, y, th, v, u, mode, e))
        V_a, d_min, clearance = (float(c) for c in row[-3:])
        records.append(StepRecord(t, tuple(agents), V_a, d_min, clearance))
    if not records:
        raise ValueError("trajectory has no data rows")
    return Trajectory(
        records,
        formation,
        meta["V_m"],
        meta["tol_conv"],
        meta.get("name", ""),
        [tuple(o) for o in meta.get("obstacles", [])],
    )


def read_trajectory(path) -> Trajectory:
    return parse_trajectory(Path(path).read_text())


def format_metrics(m: RunMetrics) -> str:
    """Flat ``key=value`` summary, one metric per line."""
    return "".join(
        [
            f"convergence_time={fmt(m.convergence_time)}\n",
            f"min_distance={fmt(m.min_distance)}\n",
            f"min_clearance={fmt(m.min_clearance)}\n",
            f"max_v={fmt(m.max_v)}\n",
            f"max_u={fmt(m.max_u)}\n",
            f"admissible={'true' if m.admissible else 'false'}\n",
        ]
    )


def parse_metrics(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if line.strip():
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out
