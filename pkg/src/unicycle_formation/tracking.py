"""Bounded reference-tracking law and the delayed heading-rate estimator."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .dynamics import ControlInput, Pose
from .geometry import EPS_POS, Vec2, wrap_angle

# Slack when comparing sample timestamps built from integer step counts.
_T_TOL = 1e-9


@dataclass(frozen=True)
class TrackingGains:
    K_theta: float
    K: float
    D_max: float

    def __post_init__(self) -> None:
        for name in ("K_theta", "K", "D_max"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"gain {name} must be positive, got {val}")

    @property
    def v_bound(self) -> float:
        return self.K * self.D_max


@dataclass(frozen=True)
class TrackingError:
    """Position/heading error of one robot against its reference point.

    `theta_d` is None when the robot sits on its reference (D below
    EPS_POS); the caller then keeps its last defined desired heading.
    """

    e_x: float
    e_y: float
    D: float
    theta_d: float | None
    e_theta: float

    @property
    def defined(self) -> bool:
        return self.theta_d is not None


def compute_errors(pose: Pose, ref_point: Vec2) -> TrackingError:
    e_x = pose.position.x - ref_point.x
    e_y = pose.position.y - ref_point.y
    D = math.sqrt(e_x * e_x + e_y * e_y)
    if D < EPS_POS:
        return TrackingError(e_x, e_y, D, None, 0.0)
    theta_d = math.atan2(-e_y, -e_x)
    return TrackingError(e_x, e_y, D, theta_d, wrap_angle(pose.heading - theta_d))


@dataclass
class EstimatorState:
    """Timestamped history of (e_x, e_y) used for backward differences.

    Parameters
    ----------
    delay : float
        Difference horizon T in seconds.
    theta_dot_cap : float, optional
        Clamp applied to the estimate; defaults to ``2*pi/delay``.
    """

    delay: float
    theta_dot_cap: float | None = None
    samples: deque = field(default_factory=deque)

    def __post_init__(self) -> None:
        if not self.delay > 0:
            raise ValueError("estimator delay must be positive")
        if self.theta_dot_cap is None:
            self.theta_dot_cap = 2.0 * math.pi / self.delay

    def push(self, t: float, e_x: float, e_y: float) -> None:
        if self.samples and t <= self.samples[-1][0]:
            raise ValueError("estimator timestamps must be strictly increasing")
        self.samples.append((t, e_x, e_y))
        # keep the newest sample at or before t - T, drop everything older
        horizon = t - self.delay + _T_TOL
        while len(self.samples) >= 2 and self.samples[1][0] <= horizon:
            self.samples.popleft()

    def reset(self) -> None:
        self.samples.clear()

    def span(self) -> float:
        if not self.samples:
            return 0.0
        return self.samples[-1][0] - self.samples[0][0]

    def _sample_at(self, t: float) -> tuple[float, float]:
        prev = None
        for s in self.samples:
            if abs(s[0] - t) <= _T_TOL:
                return s[1], s[2]
            if s[0] > t:
                t0, x0, y0 = prev
                w = (t - t0) / (s[0] - t0)
                return x0 + w * (s[1] - x0), y0 + w * (s[2] - y0)
            prev = s
        raise LookupError(t)


def estimate_theta_dot(est: EstimatorState, now: float) -> float:
    """Estimate the desired-heading rate from the newest sample at `now`.

    Returns 0 until the history spans the full delay or when the robot sits
    on its reference.
    """
    if not est.samples or est.span() < est.delay - _T_TOL:
        return 0.0
    t_last, e_x, e_y = est.samples[-1]
    if abs(t_last - now) > _T_TOL:
        raise ValueError(f"estimator has no sample at t={now}")
    D2 = e_x * e_x + e_y * e_y
    if math.sqrt(D2) < EPS_POS:
        return 0.0
    x_old, y_old = est._sample_at(now - est.delay)
    dex = (e_x - x_old) / est.delay
    dey = (e_y - y_old) / est.delay
    rate = (e_x * dey - e_y * dex) / D2
    cap = est.theta_dot_cap
    return min(cap, max(-cap, rate))


def tracking_law(
    gains: TrackingGains, err: TrackingError, theta_dot_hat: float
) -> ControlInput:
    u = -gains.K_theta * err.e_theta + theta_dot_hat
    if not err.defined:
        return ControlInput(v=0.0, u=u)
    v = gains.K * math.cos(err.e_theta) * min(gains.D_max, err.D)
    return ControlInput(v=v, u=u)
