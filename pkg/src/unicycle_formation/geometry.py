"""Planar vector and angle helpers shared by the controllers and the engine."""

from __future__ import annotations

import math
from dataclasses import dataclass

#: Two points closer than this are treated as coincident (meters).
EPS_POS = 1e-9

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Vec2:
    """A point or displacement in the inertial plane, in meters."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite vector ({self.x}, {self.y})")

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> Vec2:
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __neg__(self) -> Vec2:
        return Vec2(-self.x, -self.y)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y)

    def dot(self, other: Vec2) -> float:
        return self.x * other.x + self.y * other.y

    def rotated(self, phi: float) -> Vec2:
        c, s = math.cos(phi), math.sin(phi)
        return Vec2(c * self.x - s * self.y, s * self.x + c * self.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


ZERO = Vec2(0.0, 0.0)


def wrap_angle(raw: float) -> float:
    """Reduce an angle to the half-open interval (-pi, pi].

    The boundary value -pi is mapped to +pi so that every residue class has
    exactly one representative.

    Raises
    ------
    ValueError
        If `raw` is NaN or infinite.
    """
    if not math.isfinite(raw):
        raise ValueError("non-finite angle")
    r = math.remainder(raw, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


def bearing(frm: Vec2, to: Vec2) -> float:
    """Heading of the ray from `frm` to `to`, wrapped to (-pi, pi]."""
    dx = to.x - frm.x
    dy = to.y - frm.y
    if math.sqrt(dx * dx + dy * dy) < EPS_POS:
        raise ValueError("undefined bearing")
    return wrap_angle(math.atan2(dy, dx))


def distance(p: Vec2, q: Vec2) -> float:
    dx = p.x - q.x
    dy = p.y - q.y
    return math.sqrt(dx * dx + dy * dy)
