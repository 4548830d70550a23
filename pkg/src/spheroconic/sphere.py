"""Point sets on the sphere: hemisphere alignment, enclosing caps, hulls.

Elliptic points are antipodal pairs.  Before any convex construction the
representatives are re-signed so that they all lie in one open hemisphere
(``align_hemisphere``).  Inside that hemisphere the gnomonic chart maps
great circles to straight lines, so spherical convex hulls are planar
hulls in the chart.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import nnls

from .errors import DegenerateInput, Unbounded
from .geometry import SpherePoint, canonical_sign, frame_from_center

COLLINEAR_TOL = 1e-9
HEMISPHERE_MARGIN = 1e-12


def as_unit_rows(points):
    """Stack SpherePoints or 3-vectors into an ``(n, 3)`` array of unit rows."""
    rows = [p.vector if isinstance(p, SpherePoint) else np.asarray(p, dtype=float) for p in points]
    if not rows:
        return np.zeros((0, 3))
    a = np.vstack(rows).astype(float)
    if a.ndim != 2 or a.shape[1] != 3:
        raise DegenerateInput("points must be 3-vectors")
    n = np.linalg.norm(a, axis=1)
    if np.any(n == 0) or not np.all(np.isfinite(n)):
        raise DegenerateInput("points must be finite and non-zero")
    return a / n[:, None]


def is_collinear(points, tol=COLLINEAR_TOL):
    """True if all points lie on one great circle within ``tol``."""
    p = as_unit_rows(points)
    if len(p) < 3:
        return True
    _, _, vt = np.linalg.svd(p)
    return bool(np.max(np.abs(p @ vt[-1])) <= tol)


@dataclass(frozen=True)
class Cap:
    """Spherical cap ``{x : x . center >= cos(radius)}``."""

    center: np.ndarray
    radius: float

    def contains(self, p, tol=1e-12):
        return float(np.dot(self.center, p)) >= math.cos(self.radius) - tol


def _cap2(p, q):
    c = p + q
    n = np.linalg.norm(c)
    if n < 1e-300:
        # antipodal pair: no cap smaller than a hemisphere
        return p, -1.0
    c = c / n
    return c, float(np.dot(c, p))


def _cap3(p, q, s):
    c = np.cross(q - p, s - p)
    n = np.linalg.norm(c)
    if n < 1e-300:
        return None
    c = c / n
    if np.dot(c, p) < 0:
        c = -c
    return c, float(np.dot(c, p))


def _welzl(p, seed=0):
    """Smallest cap around rows of ``p`` (all in one open hemisphere)."""
    order = np.random.default_rng(seed).permutation(len(p))
    p = p[order]
    eps = 1e-13

    def inside(c, h, x):
        return np.dot(c, x) >= h - eps

    c, h = p[0], 1.0
    for i in range(1, len(p)):
        if inside(c, h, p[i]):
            continue
        c, h = p[i], 1.0
        for j in range(i):
            if inside(c, h, p[j]):
                continue
            c, h = _cap2(p[i], p[j])
            for k in range(j):
                if inside(c, h, p[k]):
                    continue
                res = _cap3(p[i], p[j], p[k])
                if res is not None:
                    c, h = res
    return c, h


def enclosing_cap(points, seed=0):
    """Smallest cap containing the given signed unit vectors.

    The vectors must lie in an open hemisphere; no antipodal flipping is
    done here.
    """
    p = as_unit_rows(points)
    if len(p) == 0:
        raise DegenerateInput("no points")
    c, h = _welzl(p, seed)
    if h <= HEMISPHERE_MARGIN:
        raise Unbounded("points do not lie in an open hemisphere")
    return Cap(c, math.acos(min(1.0, h)))


def _flip_towards(p, d):
    s = np.sign(p @ d)
    s[s == 0] = 1.0
    return p * s[:, None]


def align_hemisphere(points):
    """Choose antipodal representatives lying in a common open hemisphere.

    Candidate directions are the dominant eigenvector of the scatter matrix
    and each input point; points are flipped towards the candidate and the
    choice with the smallest enclosing cap wins.

    Returns
    -------
    aligned : ndarray (n, 3)
    cap : Cap
        Smallest cap of the aligned representatives.

    Raises
    ------
    Unbounded
        If no candidate gives a cap of radius below pi/2.
    """
    p = as_unit_rows(points)
    w, v = np.linalg.eigh(p.T @ p)
    candidates = [v[:, -1]] + list(p)
    best = None
    for d in candidates:
        q = _flip_towards(p, d)
        if np.min(q @ d) <= HEMISPHERE_MARGIN:
            continue
        try:
            cap = enclosing_cap(q)
        except Unbounded:
            continue
        if best is None or cap.radius < best[1].radius - 1e-15:
            best = (q, cap)
    if best is None or best[1].radius >= 0.5 * math.pi - 1e-9:
        raise Unbounded("points do not lie in an open hemisphere")
    q, cap = best
    # the overall sign is arbitrary; fix it by the cap center
    sgn = canonical_sign(*cap.center)
    return q * sgn, Cap(cap.center * sgn, cap.radius)


def gnomonic(points, center):
    """Gnomonic chart coordinates around ``center`` (frame from ``center``)."""
    p = as_unit_rows(points)
    r = frame_from_center(center)
    loc = p @ r
    if np.any(loc[:, 2] <= 0):
        raise DegenerateInput("points are not in the hemisphere of the chart center")
    return loc[:, :2] / loc[:, 2:3]


def convex_hull_2d(xy):
    """Indices of the convex hull vertices in counter-clockwise order."""
    xy = np.asarray(xy, dtype=float)
    order = sorted(range(len(xy)), key=lambda i: (xy[i, 0], xy[i, 1]))

    def cross(o, a, b):
        return ((xy[a, 0] - xy[o, 0]) * (xy[b, 1] - xy[o, 1])
                - (xy[a, 1] - xy[o, 1]) * (xy[b, 0] - xy[o, 0]))

    lower, upper = [], []
    for i in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    for i in reversed(order):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class SphericalHull:
    """Spherical convex hull of an aligned point set.

    ``normals[i]`` is the unit normal of the i-th edge great circle,
    pointing into the hull; ``x`` is inside iff ``normals @ x >= 0`` for the
    representative with ``x . axis > 0``.
    """

    points: np.ndarray
    vertices: tuple
    normals: np.ndarray
    axis: np.ndarray

    def signed_distances(self, x):
        """Angular distances from ``x`` to each edge circle (positive inside)."""
        x = np.asarray(list(x), dtype=float)
        x = x / np.linalg.norm(x)
        if np.dot(x, self.axis) < 0:
            x = -x
        return np.arcsin(np.clip(self.normals @ x, -1.0, 1.0))

    def contains(self, x, tol=0.0):
        """True if ``x`` is strictly inside by more than ``tol`` radians."""
        return bool(np.min(self.signed_distances(x)) > tol)


def spherical_hull(points, toward=None):
    """Hull of a bounded, full-dimensional elliptic point set.

    By default the representatives come from ``align_hemisphere``.  With
    ``toward`` given, each point is instead represented by the sign with
    positive inner product with ``toward``, and the hull is built around
    that direction.
    """
    p = as_unit_rows(points)
    if len(p) < 3:
        raise DegenerateInput("need at least 3 points")
    if is_collinear(p):
        raise DegenerateInput("points lie on one great circle")
    if toward is None:
        aligned, cap = align_hemisphere(p)
        axis = cap.center
    else:
        axis = np.asarray(list(toward), dtype=float)
        axis = axis / np.linalg.norm(axis)
        if np.min(np.abs(p @ axis)) <= HEMISPHERE_MARGIN:
            raise Unbounded("a point lies on the polar line of the direction")
        aligned = _flip_towards(p, axis)
    xy = gnomonic(aligned, axis)
    idx = convex_hull_2d(xy)
    if len(idx) < 3:
        raise DegenerateInput("hull is degenerate")
    verts = aligned[idx]
    normals = np.cross(verts, np.roll(verts, -1, axis=0))
    normals /= np.linalg.norm(normals, axis=1)[:, None]
    inner = verts.mean(axis=0)
    normals *= np.sign(normals @ inner)[:, None]
    return SphericalHull(aligned, tuple(int(i) for i in idx), normals, axis)


def least_distance(g, h):
    """Minimum-norm ``y`` with ``g @ y >= h`` (Lawson-Hanson LDP via NNLS).

    Returns None if the constraints are infeasible.
    """
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    m, n = g.shape
    e = np.vstack([g.T, h[None, :]])
    f = np.zeros(n + 1)
    f[-1] = 1.0
    u, _ = nnls(e, f, maxiter=50 * (m + n + 1))
    r = e @ u - f
    if abs(r[-1]) < 1e-14:
        return None
    return -r[:n] / r[-1]


def inscribed_cap(points):
    """Largest cap inside the spherical convex hull of the points.

    Maximising ``min_i n_i . c`` over unit ``c`` is equivalent to finding
    the minimum-norm ``y`` with ``n_i . y >= 1``; then ``c = y / |y|`` and
    ``sin(radius) = 1 / |y|``.
    """
    hull = spherical_hull(points)
    y = least_distance(hull.normals, np.ones(len(hull.normals)))
    if y is None:
        raise DegenerateInput("hull has empty interior")
    ny = float(np.linalg.norm(y))
    return Cap(y / ny, math.asin(min(1.0, 1.0 / ny)))


def inscribed_circle_radius(points):
    """Radius (radians) of the largest circle inside the spherical hull.

    Raises
    ------
    DegenerateInput
        Fewer than 3 points, or all on one great circle within 1e-9.
    """
    return inscribed_cap(points).radius
