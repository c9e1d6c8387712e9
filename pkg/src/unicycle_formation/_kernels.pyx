# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled interaction kernel; see ``_kernels_py.interaction_field`` for the contract."""

from libc.math cimport sqrt, tanh, cosh, log, fabs, INFINITY

cdef double _LN2 = log(2.0)
cdef double _EPS_POS = 1e-9


cdef inline double _log_cosh(double x) nogil:
    cdef double ax = fabs(x)
    if ax > 20.0:
        return ax - _LN2
    return log(cosh(x))


def interaction_field(xs, ys, obs, double K, double b, double c):
    cdef Py_ssize_t n = len(xs)
    cdef Py_ssize_t m = len(obs)
    cdef Py_ssize_t i, j, k_
    cdef double[::1] px_ = _as_doubles(xs)
    cdef double[::1] py_ = _as_doubles(ys)
    cdef double[::1] ocx = _as_doubles([o[0] for o in obs])
    cdef double[::1] ocy = _as_doubles([o[1] for o in obs])
    cdef double[::1] orad = _as_doubles([o[2] for o in obs])
    fx_list = [0.0] * n
    fy_list = [0.0] * n
    threat_list = [INFINITY] * n
    cdef double[::1] fx = _as_doubles(fx_list)
    cdef double[::1] fy = _as_doubles(fy_list)
    cdef double[::1] threat = _as_doubles(threat_list)
    cdef double va_pairs = 0.0, va_virtual, d_min = INFINITY, clearance = INFINITY
    cdef double xi, yi, dx, dy, r, kk, ox, oy, d, s, w, qx, qy
    cdef Py_ssize_t coincident = -1, inside = -1

    for i in range(n):
        xi = px_[i]
        yi = py_[i]
        for j in range(i + 1, n):
            dx = px_[j] - xi
            dy = py_[j] - yi
            r = sqrt(dx * dx + dy * dy)
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
                kk = K * tanh(r - c) / r
                fx[i] += kk * dx
                fy[i] += kk * dy
                fx[j] -= kk * dx
                fy[j] -= kk * dy
    va_virtual = 0.0
    for i in range(n):
        xi = px_[i]
        yi = py_[i]
        for k_ in range(m):
            ox = xi - ocx[k_]
            oy = yi - ocy[k_]
            d = sqrt(ox * ox + oy * oy)
            s = d - orad[k_]
            if s < clearance:
                clearance = s
            if s < threat[i]:
                threat[i] = s
            if s <= 0.0:
                if inside < 0:
                    inside = i
                continue
            if s < b:
                w = orad[k_] / d
                qx = w * xi + (1.0 - w) * ocx[k_]
                qy = w * yi + (1.0 - w) * ocy[k_]
                dx = qx - xi
                dy = qy - yi
                va_virtual += K * _log_cosh(s - c)
                kk = K * tanh(s - c) / s
                fx[i] += kk * dx
                fy[i] += kk * dy
    return (
        list(fx), list(fy), list(threat),
        va_pairs, va_virtual, d_min, clearance, inside, coincident,
    )


def _as_doubles(values):
    from array import array
    return array("d", [float(v) for v in values])
