"""Independent reference computations used by the tests.

None of these share code paths with the library beyond plain numpy.
"""

import math

import numpy as np
from scipy.optimize import minimize

_T = np.linspace(0.0, math.pi, 2048, endpoint=False)
_C, _S = np.cos(_T), np.sin(_T)


def area_trapezoid(m11, m12, m22):
    """Area of ``[[m11, m12, 0], [m12, m22, 0], [0, 0, -1]]`` by the periodic
    trapezoid rule (spectrally accurate for this smooth periodic integrand).

    Accepts broadcastable arrays.
    """
    m11, m12, m22 = (np.asarray(v, dtype=float)[..., None] for v in (m11, m12, m22))
    g = m11 * _C**2 + 2.0 * m12 * _C * _S + m22 * _S**2
    return 2.0 * math.pi - 2.0 * math.pi * np.mean(np.sqrt(g / (1.0 + g)), axis=-1)


def _frontier(uu, direction):
    # largest t with t * u^T D u <= z^2 for all points, D = direction matrix
    q = np.einsum("ni,...ij,nj->...n", uu[:, :2], direction, uu[:, :2])
    z2 = uu[:, 2] ** 2
    with np.errstate(divide="ignore"):
        lim = np.where(q > 0, z2 / np.where(q > 0, q, 1.0), np.inf)
    return lim.min(axis=-1)


def grid_fixed_axes(local, n=801, rounds=6):
    """Minimal area over ``diag(nu1, nu2, -1)`` enclosing the local points.

    Area decreases in both ``nu``, so the optimum lies on the frontier; the
    frontier is parametrised by the direction angle and scanned with zoom.
    """
    lo, hi = 1e-6, 0.5 * math.pi - 1e-6
    best = None
    for _ in range(rounds):
        th = np.linspace(lo, hi, n)
        d = np.zeros((n, 2, 2))
        d[:, 0, 0], d[:, 1, 1] = np.cos(th), np.sin(th)
        t = _frontier(local, d)
        areas = area_trapezoid(t * np.cos(th), 0.0, t * np.sin(th))
        k = int(np.nanargmin(areas))
        best = (areas[k], t[k] * math.cos(th[k]), t[k] * math.sin(th[k]))
        step = (hi - lo) / (n - 1)
        lo, hi = max(1e-9, th[k] - 2 * step), min(0.5 * math.pi - 1e-9, th[k] + 2 * step)
    return best


def grid_fixed_center(local, n=61):
    """Minimal area over ``[[m11, m12], [m12, m22]]`` blocks (center e3).

    A dense grid over directions ``[[1 + r cos f, r sin f], [r sin f, 1 - r cos f]]``
    (``0 <= r < 1``, each pushed to the frontier) locates the optimum, which
    is then refined by SLSQP on the trapezoid area with finite-difference
    gradients.
    """
    rr, ff = np.meshgrid(np.linspace(0.0, 0.98, n), np.linspace(0.0, 2.0 * math.pi, 2 * n), indexing="ij")
    d = np.empty(rr.shape + (2, 2))
    d[..., 0, 0] = 1 + rr * np.cos(ff)
    d[..., 1, 1] = 1 - rr * np.cos(ff)
    d[..., 0, 1] = d[..., 1, 0] = rr * np.sin(ff)
    t = _frontier(local, d)
    areas = area_trapezoid(t * d[..., 0, 0], t * d[..., 0, 1], t * d[..., 1, 1])
    i, j = np.unravel_index(int(np.nanargmin(areas)), areas.shape)
    x0 = 0.999 * t[i, j] * np.array([d[i, j, 0, 0], d[i, j, 0, 1], d[i, j, 1, 1]])
    x, y, z = local.T
    a = np.column_stack([x * x, 2 * x * y, y * y])
    b = z * z
    scale = float(np.max(np.abs(x0)))

    def fun(v):
        m = v * scale
        if m[0] <= 0 or m[0] * m[2] - m[1] ** 2 <= 0:
            return 10.0
        return float(area_trapezoid(*m))

    res = minimize(fun, x0 / scale, method="SLSQP",
                   constraints=[{"type": "ineq", "fun": lambda v: (b - a @ (v * scale)) / scale}],
                   options={"ftol": 1e-15, "maxiter": 500})
    m = res.x * scale
    m = m * min(1.0, float(np.min(b / np.maximum(a @ m, 1e-300))))
    return float(area_trapezoid(*m)), m
