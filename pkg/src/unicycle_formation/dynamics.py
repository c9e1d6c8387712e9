"""Unicycle kinematics advanced with a fixed-step explicit Euler update."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Vec2, wrap_angle


class InvalidStateError(ValueError):
    pass


@dataclass(frozen=True)
class Pose:
    """Planar position and heading of one robot."""

    position: Vec2
    heading: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.heading):
            raise InvalidStateError("invalid state")
        object.__setattr__(self, "heading", wrap_angle(self.heading))

    @property
    def x(self) -> float:
        return self.position.x

    @property
    def y(self) -> float:
        return self.position.y


@dataclass(frozen=True)
class ControlInput:
    """Translational speed `v` (m/s) and angular speed `u` (rad/s)."""

    v: float
    u: float

    def within(self, v_cap: float, u_cap: float) -> bool:
        return abs(self.v) <= v_cap and abs(self.u) <= u_cap


def step(
    pose: Pose,
    inp: ControlInput,
    dt: float,
    v_cap: float = math.inf,
    u_cap: float = math.inf,
) -> Pose:
    """Advance `pose` by one Euler step of length `dt`.

    Speed caps are enforced upstream; an input outside them is rejected here
    rather than clipped.
    """
    if not (dt > 0 and math.isfinite(dt)):
        raise InvalidStateError(f"dt must be positive, got {dt}")
    if not (math.isfinite(inp.v) and math.isfinite(inp.u)):
        raise InvalidStateError("invalid state")
    if not inp.within(v_cap, u_cap):
        raise InvalidStateError(
            f"input (v={inp.v}, u={inp.u}) exceeds caps ({v_cap}, {u_cap})"
        )
    th = pose.heading
    x = pose.position.x + dt * inp.v * math.cos(th)
    y = pose.position.y + dt * inp.v * math.sin(th)
    try:
        return Pose(Vec2(x, y), wrap_angle(th + dt * inp.u))
    except ValueError as exc:
        raise InvalidStateError("invalid state") from exc


def nonholonomic_residual(
    before: Pose, after: Pose, inp: ControlInput, dt: float
) -> float:
    """Side-slip rate of a step, evaluated at the pre-step heading.

    Zero for any step produced by :func:`step`. `inp` is unused by the
    formula but kept so callers pass the full step description.
    """
    dx = after.position.x - before.position.x
    dy = after.position.y - before.position.y
    th = before.heading
    return abs(dy * math.cos(th) - dx * math.sin(th)) / dt
