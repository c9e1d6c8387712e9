"""Fixed-step synchronous closed-loop runner and run metrics."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .dynamics import ControlInput, step
from .geometry import Vec2
from .potential import CoincidentPositionsError, v_m
from .supervisor import AgentContext, Mode, Snapshot, World, agent_step
from .tracking import EstimatorState

log = logging.getLogger(__name__)


class SimulationFault(RuntimeError):
    """Physical fault that aborts a run (agent inside an obstacle, collision).

    Attributes
    ----------
    step_index : int
        Index of the record at which the fault was detected.
    records : list of StepRecord
        Records produced before the fault.
    """

    def __init__(self, message: str, step_index: int, records=None):
        super().__init__(f"{message} (record {step_index})")
        self.step_index = step_index
        self.records = records or []


@dataclass(frozen=True)
class AgentRecord:
    id: int
    x: float
    y: float
    theta: float
    v: float
    u: float
    mode: Mode
    # tracking error norm; kept in memory only, recomputable from x, y
    e: float


@dataclass(frozen=True)
class StepRecord:
    t: float
    agents: tuple[AgentRecord, ...]
    V_a: float
    d_min: float
    clearance: float


@dataclass(frozen=True)
class RunMetrics:
    convergence_time: float
    min_distance: float
    min_clearance: float
    max_v: float
    max_u: float
    admissible: bool


def compute_metrics(
    records: Sequence[StepRecord], V_m: float, tol_conv: float = 0.5
) -> RunMetrics:
    """Aggregate run metrics from step records alone.

    `convergence_time` is the earliest record time after which every agent's
    tracking error stays below `tol_conv`; ``inf`` if the last record is not
    converged. `admissible` compares `V_m` with the first record's potential.
    """
    if not records:
        raise ValueError("no records")
    conv = math.inf
    for rec in reversed(records):
        if all(a.e < tol_conv for a in rec.agents):
            conv = rec.t
        else:
            break
    return RunMetrics(
        convergence_time=conv,
        min_distance=min(r.d_min for r in records),
        min_clearance=min(r.clearance for r in records),
        max_v=max(abs(a.v) for r in records for a in r.agents),
        max_u=max(abs(a.u) for r in records for a in r.agents),
        admissible=V_m > records[0].V_a,
    )


def _snapshot(t, contexts, world, step_index, records):
    xs = [c.pose.position.x for c in contexts]
    ys = [c.pose.position.y for c in contexts]
    obs = [(o.center.x, o.center.y, o.radius) for o in world.obstacles]
    p = world.params
    (fx, fy, threat, va, _va_virtual, d_min, clearance, inside, coincident) = (
        kernels.interaction_field(xs, ys, obs, p.K_ij, p.b, p.c)
    )
    if inside >= 0:
        raise SimulationFault(
            f"agent {contexts[inside].id} inside obstacle", step_index, records
        )
    if coincident >= 0:
        raise SimulationFault(
            f"agent {contexts[coincident].id} coincides with another agent",
            step_index,
            records,
        )
    snap = Snapshot(
        t=t,
        positions=[c.pose.position for c in contexts],
        forces=[Vec2(a, b) for a, b in zip(fx, fy)],
        threat=threat,
        world=world,
    )
    return snap, va, d_min, clearance


def run(scenario, parallel: bool = False, max_workers: int | None = None):
    """Simulate `scenario` and return ``(records, metrics)``.

    Every step takes one snapshot, lets each agent pick its mode and control
    from it, clips to the configured caps and advances all poses together.
    With ``parallel=True`` the per-agent control evaluation is spread over a
    thread pool; results are identical to the sequential path.

    Raises
    ------
    SimulationFault
        If an agent enters an obstacle, two agents coincide, or a control
        law output exceeds its theoretical bound.
    """
    world = World(
        params=scenario.potential,
        obstacles=tuple(scenario.obstacles),
        formation=scenario.formation,
        h_hyst=scenario.h_hyst,
        min_dwell=scenario.min_dwell,
        d_circ=scenario.d_circ,
    )
    contexts = []
    for idx, agent in enumerate(scenario.agents):
        gains = scenario.gains_for(agent.id)
        contexts.append(
            AgentContext(
                id=agent.id,
                index=idx,
                pose=agent.pose,
                gains=gains,
                estimator=EstimatorState(scenario.T, scenario.theta_dot_cap_value),
            )
        )
    Vm = v_m(scenario.potential)
    try:
        ok = scenario.is_admissible()
    except CoincidentPositionsError as exc:
        raise SimulationFault(f"initial layout: {exc}", 0, []) from None
    if not ok:
        log.warning("initial layout is not admissible: V_a(0) >= V_m = %.6g", Vm)

    dt = scenario.dt
    n_steps = scenario.n_steps
    records: list[StepRecord] = []
    pool = ThreadPoolExecutor(max_workers=max_workers) if parallel else None
    try:
        for k in range(n_steps + 1):
            t = k * dt
            snap, va, d_min, clearance = _snapshot(t, contexts, world, k, records)
            if pool is not None:
                raw = list(pool.map(agent_step, contexts, [snap] * len(contexts)))
            else:
                raw = [agent_step(c, snap) for c in contexts]
            inputs = []
            for ctx, inp in zip(contexts, raw):
                v_bound, u_bound = scenario.input_bounds(ctx.id)
                if abs(inp.v) > v_bound or abs(inp.u) > u_bound:
                    raise SimulationFault(
                        f"agent {ctx.id} input (v={inp.v!r}, u={inp.u!r}) exceeds "
                        f"bounds ({v_bound}, {u_bound})",
                        k,
                        records,
                    )
                v_cap, u_cap = scenario.input_caps(ctx.id)
                inputs.append(
                    ControlInput(
                        v=min(v_cap, max(-v_cap, inp.v)),
                        u=min(u_cap, max(-u_cap, inp.u)),
                    )
                )
            records.append(
                StepRecord(
                    t=t,
                    agents=tuple(
                        AgentRecord(
                            id=c.id,
                            x=c.pose.position.x,
                            y=c.pose.position.y,
                            theta=c.pose.heading,
                            v=inp.v,
                            u=inp.u,
                            mode=c.mode,
                            e=c.e_norm,
                        )
                        for c, inp in zip(contexts, inputs)
                    ),
                    V_a=va,
                    d_min=d_min,
                    clearance=clearance,
                )
            )
            if k == n_steps:
                break
            for ctx, inp in zip(contexts, inputs):
                v_cap, u_cap = scenario.input_caps(ctx.id)
                ctx.pose = step(ctx.pose, inp, dt, v_cap, u_cap)
    finally:
        if pool is not None:
            pool.shutdown()
    return records, compute_metrics(records, Vm, scenario.tol_conv)
