"""Small closed-loop harnesses shared by the property and acceptance tests."""

import math

from unicycle_formation.avoidance import avoidance_law, avoidance_reference
from unicycle_formation.dynamics import Pose, step
from unicycle_formation.geometry import Vec2, wrap_angle
from unicycle_formation.potential import total_force, total_system_potential
from unicycle_formation.tracking import (
    EstimatorState,
    compute_errors,
    estimate_theta_dot,
    tracking_law,
)


def static_tracking(gains, pose, ref, dt, duration, T=None):
    """Track a fixed point; returns per-step V_t and error distance lists."""
    est = EstimatorState(T if T is not None else 5 * dt)
    V, D = [], []
    for k in range(int(round(duration / dt)) + 1):
        t = k * dt
        err = compute_errors(pose, ref)
        est.push(t, err.e_x, err.e_y)
        V.append(0.5 * (err.e_x**2 + err.e_y**2 + err.e_theta**2))
        D.append(err.D)
        pose = step(pose, tracking_law(gains, err, estimate_theta_dot(est, t)), dt)
    return V, D


def head_on(gains, params, dt, r0=1.5, duration=3.0, flip=False):
    """Two agents facing each other, driven only by the avoidance law.

    With ``flip`` the desired heading points against the force. Returns the
    total potential V_a at every step.
    """
    poses = [Pose(Vec2(0.0, 0.0), 0.0), Pose(Vec2(r0, 0.0), math.pi)]
    held = [p.heading for p in poses]
    V = []
    for _ in range(int(round(duration / dt)) + 1):
        pos = [p.position for p in poses]
        V.append(total_system_potential(pos, None, params))
        nxt = []
        for i, p in enumerate(poses):
            ref = avoidance_reference(total_force(i, pos, [], params))
            if ref.theta_d is not None:
                held[i] = wrap_angle(ref.theta_d + math.pi) if flip else ref.theta_d
            inp = avoidance_law(gains, wrap_angle(p.heading - held[i]), ref.D)
            nxt.append(step(p, inp, dt))
        poses = nxt
    return V


def max_increase(series):
    return max(b - a for a, b in zip(series, series[1:]))
