"""Gated ln-cosh repulsive potential between agents and its forces.

The potential of a pair at separation ``r`` is ``K ln cosh(r - c)`` inside the
detection radius ``b`` and zero outside. With ``0 < a < b < c`` it is bounded
by its value at ``r = a`` and decreasing on ``(a, b)``; the jump at ``r = b``
is intentional (the gate is a hard step).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .geometry import EPS_POS, ZERO, Vec2, distance


class CoincidentPositionsError(ValueError):
    pass


@dataclass(frozen=True)
class PotentialParams:
    K_ij: float
    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.K_ij) and self.K_ij > 0):
            raise ValueError("potential gain K_ij must be positive")
        if not (0 < self.a < self.b < self.c):
            raise ValueError("potential params must satisfy a < b < c")


def _log_cosh(x: float) -> float:
    # cosh overflows near |x| ~ 710; the asymptotic form is exact to double there
    ax = abs(x)
    if ax > 20.0:
        return ax - math.log(2.0)
    return math.log(math.cosh(x))


def _separation(p_i: Vec2, p_j: Vec2) -> float:
    r = distance(p_i, p_j)
    if r < EPS_POS:
        raise CoincidentPositionsError("coincident positions")
    return r


def potential_of_distance(r: float, params: PotentialParams) -> float:
    if r >= params.b:
        return 0.0
    return params.K_ij * _log_cosh(r - params.c)


def pairwise_potential(p_i: Vec2, p_j: Vec2, params: PotentialParams) -> float:
    return potential_of_distance(_separation(p_i, p_j), params)


def v_m(params: PotentialParams) -> float:
    """Potential level at the avoidance radius ``a``."""
    return params.K_ij * _log_cosh(params.a - params.c)


def gate_jump(params: PotentialParams) -> float:
    """Size of the discontinuity of the pair potential at ``r = b``."""
    return params.K_ij * _log_cosh(params.b - params.c)


def pairwise_force(p_i: Vec2, p_j: Vec2, params: PotentialParams) -> Vec2:
    """Repulsive force on agent i from j, i.e. minus the gradient in p_i.

    Zero outside the detection radius.
    """
    r = _separation(p_i, p_j)
    if r >= params.b:
        return ZERO
    k = params.K_ij * math.tanh(r - params.c) / r
    return Vec2(k * (p_j.x - p_i.x), k * (p_j.y - p_i.y))


def neighbor_set(i: int, positions: Sequence[Vec2], b: float) -> set[int]:
    p_i = positions[i]
    return {
        j for j, p_j in enumerate(positions) if j != i and distance(p_i, p_j) < b
    }


def total_force(
    i: int,
    positions: Sequence[Vec2],
    virtual_positions: Sequence[Vec2],
    params: PotentialParams,
) -> Vec2:
    """Sum of pairwise forces on agent `i` from agents and its virtual robots.

    `virtual_positions` are agent i's own projections onto nearby obstacles.
    """
    fx = fy = 0.0
    p_i = positions[i]
    for j in sorted(neighbor_set(i, positions, params.b)):
        f = pairwise_force(p_i, positions[j], params)
        fx += f.x
        fy += f.y
    for q in virtual_positions:
        f = pairwise_force(p_i, q, params)
        fx += f.x
        fy += f.y
    return Vec2(fx, fy)


def total_system_potential(
    positions: Sequence[Vec2],
    virtual_positions: Sequence[Sequence[Vec2]] | None,
    params: PotentialParams,
) -> float:
    """Coordination potential summed over ordered agent pairs.

    Each unordered pair contributes twice. Agent-to-virtual-robot terms
    (``virtual_positions[i]`` lists agent i's projections) are counted once,
    since a virtual robot does not act back.
    """
    total = 0.0
    n = len(positions)
    for i in range(n):
        for j in range(n):
            if j != i:
                total += pairwise_potential(positions[i], positions[j], params)
    if virtual_positions is not None:
        for i, qs in enumerate(virtual_positions):
            for q in qs:
                total += pairwise_potential(positions[i], q, params)
    return total


def admissible(positions: Sequence[Vec2], params: PotentialParams) -> bool:
    """Whether the initial layout satisfies the collision-guarantee premise."""
    return v_m(params) > total_system_potential(positions, None, params)
