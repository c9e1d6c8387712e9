"""Pure-Python interaction kernel; mirrors ``_kernels.pyx`` operation for operation."""

import math

_LN2 = math.log(2.0)
_EPS_POS = 1e-9


def _log_cosh(x):
    ax = abs(x)
    if ax > 20.0:
        return ax - _LN2
    return math.log(math.cosh(x))


def interaction_field(xs, ys, obs, K, b, c):
    """Forces, potential and clearance for one position snapshot.

    Parameters
    ----------
    xs, ys : sequence of float, length N
        Agent positions.
    obs : sequence of (cx, cy, radius)
        Circular obstacles.
    K, b, c : float
        Potential gain, detection radius and offset.

    Returns
    -------
    tuple
        ``(fx, fy, threat, va_pairs, va_virtual, d_min, clearance, inside,
        coincident)``. `fx`, `fy` are per-agent net repulsive forces (agents
        plus virtual robots), `threat` the per-agent distance to the nearest
        agent or obstacle surface, `va_pairs` the potential summed over
        ordered agent pairs, `va_virtual` the agent-to-virtual-robot terms,
        `d_min` the minimum pairwise distance, `clearance` the minimum
        obstacle surface distance. `inside` is the first agent index
        on or inside an obstacle and `coincident` the first agent of a
        coincident pair, each -1 when absent. Forces and potentials are not
        meaningful when either fault index is set.
    """
    xs = [float(v) for v in xs]
    ys = [float(v) for v in ys]
    n = len(xs)
    fx = [0.0] * n
    fy = [0.0] * n
    threat = [math.inf] * n
    va_pairs = 0.0
    d_min = math.inf
    coincident = -1
    for i in range(n):
        xi = xs[i]
        yi = ys[i]
        for j in range(i + 1, n):
            dx = xs[j] - xi
            dy = ys[j] - yi
            r = math.sqrt(dx * dx + dy * dy)
            if r < d_min:
                d_min = r
            if r < threat[i]:
                threat[i] = r
            if r < threat[j]:
                threat[j] = r
            if r < _EPS_POS:
                if coincident < 0:
                    coincident = i
                continue
            if r < b:
                va_pairs += 2.0 * (K * _log_cosh(r - c))
                k = K * math.tanh(r - c) / r
                fx[i] += k * dx
                fy[i] += k * dy
                fx[j] -= k * dx
                fy[j] -= k * dy
    clearance = math.inf
    inside = -1
    va_virtual = 0.0
    for i in range(n):
        xi = xs[i]
        yi = ys[i]
        for cx, cy, rad in obs:
            ox = xi - cx
            oy = yi - cy
            d = math.sqrt(ox * ox + oy * oy)
            s = d - rad
            if s < clearance:
                clearance = s
            if s < threat[i]:
                threat[i] = s
            if s <= 0.0:
                if inside < 0:
                    inside = i
                continue
            if s < b:
                w = rad / d
                px = w * xi + (1.0 - w) * cx
                py = w * yi + (1.0 - w) * cy
                dx = px - xi
                dy = py - yi
                va_virtual += K * _log_cosh(s - c)
                k = K * math.tanh(s - c) / s
                fx[i] += k * dx
                fy[i] += k * dy
    return (
        fx, fy, threat, va_pairs, va_virtual, d_min, clearance, inside, coincident
    )
