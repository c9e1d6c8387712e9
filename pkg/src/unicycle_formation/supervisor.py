"""Per-agent mode switching between tracking, avoidance and circumnavigation."""

from __future__ import annotations

import enum
import sys
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .avoidance import (
    Obstacle,
    avoidance_law,
    avoidance_reference,
    circumnavigation_heading,
)
from .dynamics import ControlInput, Pose
from .geometry import EPS_POS, Vec2, bearing, wrap_angle
from .potential import PotentialParams
from .tracking import (
    EstimatorState,
    TrackingGains,
    compute_errors,
    estimate_theta_dot,
    tracking_law,
)


class Mode(enum.Enum):
    TRACK = "track"
    AVOID = "avoid"
    CIRCUMNAVIGATE = "circumnavigate"


@dataclass(frozen=True)
class FormationSpec:
    """Reference trajectories for every agent.

    ``kind="affine"``: ``p_d(t) = velocity * t + offsets[i]``.
    ``kind="circular"``: ``p_d(t) = center + radius * (cos, sin)(rate*t + phases[i])``.
    """

    kind: str = "affine"
    velocity: tuple[float, float] = (0.0, 0.0)
    offsets: Mapping[int, tuple[float, float]] = field(default_factory=dict)
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 0.0
    rate: float = 0.0
    phases: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in ("affine", "circular"):
            raise ValueError(f"unknown formation kind {self.kind!r}")
        if self.kind == "circular" and self.radius < 0:
            raise ValueError("circular formation radius must be >= 0")

    def agent_ids(self) -> set[int]:
        return set(self.offsets if self.kind == "affine" else self.phases)


def reference(spec: FormationSpec, i: int, t: float) -> tuple[Vec2, Vec2]:
    """Reference point of agent `i` at time `t` and its time derivative."""
    if spec.kind == "affine":
        ox, oy = spec.offsets[i]
        vx, vy = spec.velocity
        return Vec2(vx * t + ox, vy * t + oy), Vec2(float(vx), float(vy))
    ang = spec.rate * t + spec.phases[i]
    c, s = math.cos(ang), math.sin(ang)
    cx, cy = spec.center
    r = spec.radius
    return (
        Vec2(cx + r * c, cy + r * s),
        Vec2(-r * spec.rate * s, r * spec.rate * c),
    )


@dataclass(frozen=True)
class World:
    """Quantities shared by every agent and fixed for a run."""

    params: PotentialParams
    obstacles: Sequence[Obstacle]
    formation: FormationSpec
    h_hyst: float = 1.0
    d_circ: float | None = None
    min_dwell: int = 10

    @property
    def circ_range(self) -> float:
        return self.params.b + 3.0 if self.d_circ is None else self.d_circ


@dataclass(frozen=True)
class Snapshot:
    """Global state at the start of one step; read-only during fan-out.

    `forces` and `threat` come from the interaction kernel evaluated on
    `positions`.
    """

    t: float
    positions: Sequence[Vec2]
    forces: Sequence[Vec2]
    threat: Sequence[float]
    world: World


@dataclass
class AgentContext:
    id: int
    index: int
    pose: Pose
    gains: TrackingGains
    estimator: EstimatorState
    mode: Mode = Mode.TRACK
    theta_d: float | None = None
    # last nonzero avoidance force magnitude, held inside the hysteresis band
    avoid_D: float = 0.0
    e_norm: float = 0.0
    # a fresh agent has no recent switch to guard against
    steps_in_mode: int = sys.maxsize

    def __post_init__(self) -> None:
        if self.theta_d is None:
            self.theta_d = self.pose.heading


def segment_hits_disk(p: Vec2, q: Vec2, center: Vec2, radius: float) -> bool:
    """Whether the segment from `p` to `q` meets the closed disk."""
    dx = q.x - p.x
    dy = q.y - p.y
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        s = 0.0
    else:
        s = ((center.x - p.x) * dx + (center.y - p.y) * dy) / L2
        s = min(1.0, max(0.0, s))
    cx = p.x + s * dx - center.x
    cy = p.y + s * dy - center.y
    return math.sqrt(cx * cx + cy * cy) <= radius


def nearest_obstacle(p: Vec2, obstacles: Sequence[Obstacle]) -> Obstacle | None:
    best = None
    best_s = math.inf
    for obs in obstacles:
        s = obs.surface_distance(p)
        if s < best_s:
            best, best_s = obs, s
    return best


def _blocking_obstacle(
    ctx: AgentContext, snapshot: Snapshot, ref_point: Vec2
) -> Obstacle | None:
    world = snapshot.world
    obs = nearest_obstacle(ctx.pose.position, world.obstacles)
    if obs is None:
        return None
    # an agent leaving avoidance is still next to the obstacle: keep the pad
    staying = ctx.mode is not Mode.TRACK
    pad = world.h_hyst if staying else 0.0
    if obs.surface_distance(ctx.pose.position) >= world.circ_range + pad:
        return None
    if (ref_point - ctx.pose.position).norm() < EPS_POS:
        return None
    inflated = obs.radius + world.params.a + pad
    if segment_hits_disk(ctx.pose.position, ref_point, obs.center, inflated):
        return obs
    return None


def mode_select(ctx: AgentContext, snapshot: Snapshot, t: float) -> Mode:
    """Pick the behavior for this step; avoidance outranks circumnavigation.

    Entering avoidance is immediate. Any other switch waits until the agent
    has spent ``world.min_dwell`` steps in its current mode.
    """
    world = snapshot.world
    limit = world.params.b
    if ctx.mode is Mode.AVOID:
        limit += world.h_hyst
    if snapshot.threat[ctx.index] < limit:
        return Mode.AVOID
    if ctx.steps_in_mode < world.min_dwell:
        return ctx.mode
    ref_point, _ = reference(world.formation, ctx.id, t)
    if _blocking_obstacle(ctx, snapshot, ref_point) is not None:
        return Mode.CIRCUMNAVIGATE
    return Mode.TRACK


def control(ctx: AgentContext, snapshot: Snapshot, t: float) -> ControlInput:
    """Control for the agent's current mode; updates the held desired heading."""
    world = snapshot.world
    ref_point, _ = reference(world.formation, ctx.id, t)
    err = compute_errors(ctx.pose, ref_point)
    ctx.e_norm = err.D

    if ctx.mode is Mode.TRACK:
        if err.defined:
            ctx.theta_d = err.theta_d
        return tracking_law(ctx.gains, err, estimate_theta_dot(ctx.estimator, t))

    if ctx.mode is Mode.AVOID:
        ref = avoidance_reference(snapshot.forces[ctx.index])
        if ref.theta_d is not None:
            ctx.theta_d = ref.theta_d
            ctx.avoid_D = ref.D
        e_theta = wrap_angle(ctx.pose.heading - ctx.theta_d)
        return avoidance_law(ctx.gains, e_theta, ctx.avoid_D)

    obs = _blocking_obstacle(ctx, snapshot, ref_point)
    if obs is None:
        obs = nearest_obstacle(ctx.pose.position, world.obstacles)
    # evaluate the tangent rule at the tracking heading; using the live heading
    # makes theta_d depend on theta and traps the robot in a limit cycle
    steer = Pose(ctx.pose.position, bearing(ctx.pose.position, ref_point))
    ctx.theta_d = circumnavigation_heading(steer, obs, ref_point)
    e_theta = wrap_angle(ctx.pose.heading - ctx.theta_d)
    return avoidance_law(ctx.gains, e_theta, err.D)


def agent_step(ctx: AgentContext, snapshot: Snapshot) -> ControlInput:
    """Mode selection, estimator bookkeeping and control for one agent.

    Touches only `ctx`, so agents can be stepped concurrently against the
    same snapshot.
    """
    t = snapshot.t
    new_mode = mode_select(ctx, snapshot, t)
    if new_mode is Mode.TRACK and ctx.mode is not Mode.TRACK:
        ctx.estimator.reset()
    if new_mode is Mode.AVOID and ctx.mode is not Mode.AVOID:
        ctx.avoid_D = 0.0
    if new_mode is ctx.mode:
        ctx.steps_in_mode += 1
    else:
        ctx.mode = new_mode
        ctx.steps_in_mode = 1
    ref_point, _ = reference(snapshot.world.formation, ctx.id, t)
    e = ctx.pose.position - ref_point
    ctx.estimator.push(t, e.x, e.y)
    return control(ctx, snapshot, t)
