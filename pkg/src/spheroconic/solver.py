"""Minimal-area conics enclosing a finite set of elliptic points.

Three modes are provided:

* fixed axes: the conic is ``R diag(nu1, nu2, -1) R^T`` for a given frame R;
* fixed center: ``R [[m11, m12, 0], [m12, m22, 0], [0, 0, -1]] R^T`` with
  ``R e3`` the given center;
* general: a multistart search over the center followed by a local
  five-parameter polish.

In the first two modes the area is a strictly convex function of the free
entries of ``(m11, m12, m22)`` and every enclosure condition
``p^T M p <= 0`` is linear, so the optimum is unique.  It is computed by a
log-barrier method with damped Newton steps and finished by an active-set
crossover that solves the KKT system on the tight constraints exactly.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
import math

import numpy as np
from scipy.linalg import qr
from scipy.optimize import minimize, nnls

from .area import area_from_eigenvalues, area_gradient3, area_quadratic_form
from .errors import (
    CenterOutsideHull, DegenerateInput, DomainError, Infeasible, NoConvergence,
    NotAConic, QuadratureFailure, Unbounded,
)
from .geometry import (
    Conic, SpherePoint, frame_from_center, normalize_conic, quaternion_rotation,
    rotation_quaternion,
)
from .sphere import align_hemisphere, as_unit_rows, is_collinear, spherical_hull
from .uniqueness import certify, inscribed_circle_radius

DUPLICATE_TOL = 1e-12
POLAR_TOL = 1e-12


class Mode(str, Enum):
    FIXED_AXES = "FixedAxes"
    FIXED_CENTER = "FixedCenter"
    GENERAL = "General"


class PointSet:
    """Bounded, full-dimensional set of at least three elliptic points.

    Points are canonicalised and antipodal duplicates removed.  ``aligned``
    holds representatives lying in one open hemisphere.
    """

    def __init__(self, points):
        pts = []
        for p in points:
            sp = p if isinstance(p, SpherePoint) else SpherePoint.from_vector(p)
            v = sp.vector
            if any(abs(float(v @ q.vector)) >= 1.0 - DUPLICATE_TOL for q in pts):
                continue
            pts.append(sp)
        if len(pts) < 3:
            raise DegenerateInput(f"need at least 3 distinct points, got {len(pts)}")
        arr = np.array([p.vector for p in pts])
        if is_collinear(arr):
            raise DegenerateInput("points lie on one great circle")
        aligned, cap = align_hemisphere(arr)
        self.points = tuple(pts)
        self.vectors = arr
        self.aligned = aligned
        self.cap = cap

    def __len__(self):
        return len(self.points)

    def rotated(self, r):
        """The point set mapped by the rotation matrix ``r``."""
        return PointSet(self.vectors @ np.asarray(r).T)


def _as_pointset(ps):
    return ps if isinstance(ps, PointSet) else PointSet(ps)


@dataclass(frozen=True)
class SolverConfig:
    """Tunable parameters of the solvers.

    The barrier weight starts at ``mu_start`` times the area of the initial
    conic and is divided by ``mu_factor`` until it drops below
    ``mu_stop`` times that area.
    """

    multistart_count: int = 8
    seed: int = 0
    active_tol: float = 1e-7
    feasibility_tol: float = 1e-7
    agreement_tol: float = 1e-4
    mu_start: float = 1.0
    mu_stop: float = 1e-9
    mu_factor: float = 10.0
    max_newton: int = 60
    newton_tol: float = 1e-14
    polish_rounds: int = 3

    def __post_init__(self):
        for name in ("active_tol", "feasibility_tol", "agreement_tol", "mu_start",
                     "mu_stop", "newton_tol"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.mu_factor <= 1:
            raise DomainError("mu_factor must exceed 1")
        if self.multistart_count < 0:
            raise DomainError("multistart_count must be non-negative")


@dataclass(frozen=True)
class SolveResult:
    conic: Conic
    area: float
    active_points: tuple
    mode: Mode
    certificate: object = None
    iterations: int = 0
    converged: bool = True
    kkt_residual: float = float("nan")
    agreement: float = float("nan")
    objective: str = "area"
    starts: int = 1

    @property
    def matrix(self):
        return self.conic.matrix


# ---------------------------------------------------------------------------
# convex core on the (m11, m12, m22) slice


def _det_terms(f):
    d = f[0] * f[2] - f[1] * f[1]
    grad = np.array([f[2], -2.0 * f[1], f[0]])
    hess = np.array([[0.0, 0.0, 1.0], [0.0, -2.0, 0.0], [1.0, 0.0, 0.0]])
    return d, grad, hess


class _Slice:
    """Enclosure constraints ``a_i . m <= b_i`` in local coordinates."""

    def __init__(self, local, idx):
        x, y, z = local.T
        self.a_full = np.column_stack([x * x, 2.0 * x * y, y * y])
        self.A = self.a_full[:, idx]
        self.b = z * z
        self.idx = list(idx)

    def full(self, m):
        f = np.zeros(3)
        f[self.idx] = m
        return f

    def in_domain(self, m):
        f = self.full(m)
        return f[0] > 0 and f[0] * f[2] - f[1] * f[1] > 0

    def slack(self, m):
        return self.b - self.A @ m

    def area(self, m, order=0):
        f = self.full(m)
        out = area_quadratic_form(f[0], f[1], f[2], order=order)
        if order == 0:
            return out
        if order == 1:
            return out[0], out[1][self.idx]
        return out[0], out[1][self.idx], out[2][np.ix_(self.idx, self.idx)]

    def barrier(self, m, mu, order=0):
        s = self.slack(m)
        if np.any(s <= 0) or not self.in_domain(m):
            return math.inf if order == 0 else (math.inf, None, None)
        d, dg, dh = _det_terms(self.full(m))
        if order == 0:
            try:
                return self.area(m) - mu * (np.sum(np.log(s)) + math.log(d))
            except QuadratureFailure:
                # only reached for nearly degenerate trial steps; reject them
                return math.inf
        val, g, h = self.area(m, 2)
        dg, dh = dg[self.idx], dh[np.ix_(self.idx, self.idx)]
        val = val - mu * (np.sum(np.log(s)) + math.log(d))
        g = g + mu * (self.A.T @ (1.0 / s)) - mu * dg / d
        h = (h + mu * (self.A.T * (1.0 / s**2)) @ self.A
             + mu * (np.outer(dg, dg) / d**2 - dh / d))
        return val, g, h


def _newton_stage(sl, m, mu, cfg):
    its = 0
    for _ in range(cfg.max_newton):
        val, g, h = sl.barrier(m, mu, order=2)
        try:
            dx = -np.linalg.solve(h, g)
        except np.linalg.LinAlgError:
            dx = -np.linalg.lstsq(h, g, rcond=None)[0]
        dec = -float(g @ dx)
        its += 1
        if dec <= cfg.newton_tol * max(1.0, abs(val)):
            break
        t = 1.0
        accepted = False
        while t > 1e-14:
            mn = m + t * dx
            vn = sl.barrier(mn, mu)
            if vn <= val - 0.25 * t * dec:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        m = mn
        if np.max(np.abs(m)) > 1e14:
            raise DegenerateInput("enclosure problem is unbounded")
    return m, its


def _nnls_residual(sl, m, rows):
    _, g = sl.area(m, 1)
    gn = float(np.linalg.norm(g))
    if len(rows) == 0:
        return 1.0 if gn > 0 else 0.0, np.zeros(0)
    lam, res = nnls(sl.A[rows].T, -g)
    return res / gn, lam


def _independent_rows(a_w, rows):
    if len(rows) == 0:
        return rows
    _, r, piv = qr(a_w.T, pivoting=True, mode="economic")
    diag = np.abs(np.diag(r))
    rank = int(np.sum(diag > 1e-10 * diag[0])) if diag.size else 0
    return rows[piv[:rank]]


def _equality_solve(sl, m, rows):
    """Minimise the area on ``{a_i . m = b_i, i in rows}`` by Newton in the null space."""
    rows = _independent_rows(sl.A[rows], rows)
    k = sl.A.shape[1]
    aw, bw = sl.A[rows], sl.b[rows]
    if len(rows) == 0:
        base, z = m.copy(), np.eye(k)
    else:
        base = np.linalg.lstsq(aw, bw, rcond=None)[0]
        _, _, vt = np.linalg.svd(aw)
        z = vt[len(rows):].T
    y = z.T @ (m - base)
    if z.shape[1] == 0:
        return base if sl.in_domain(base) else None
    for _ in range(50):
        cur = base + z @ y
        if not sl.in_domain(cur):
            return None
        val, g, h = sl.area(cur, 2)
        gy, hy = z.T @ g, z.T @ h @ z
        dy = -np.linalg.solve(hy, gy)
        t = 1.0
        while t > 1e-12 and not sl.in_domain(base + z @ (y + t * dy)):
            t *= 0.5
        y = y + t * dy
        if np.linalg.norm(t * dy) <= 1e-15 * max(1.0, np.linalg.norm(y)):
            break
    cur = base + z @ y
    return cur if sl.in_domain(cur) else None


def _crossover(sl, m, mu):
    s = sl.slack(m)
    _, g = sl.area(m, 1)
    gn = float(np.linalg.norm(g))
    weight = (mu / s) * np.linalg.norm(sl.A, axis=1)
    scale = np.max(np.abs(sl.b))
    for thr in (1e-6, 1e-4, 1e-2, 1e-8):
        rows = np.flatnonzero(weight > thr * gn)
        cand = _equality_solve(sl, m, rows)
        if cand is None:
            continue
        if np.min(sl.slack(cand)) < -1e-13 * scale:
            continue
        res, lam = _nnls_residual(sl, cand, rows)
        if res <= 1e-9:
            return cand
    return None


def _solve_slice(local, idx, start, cfg):
    sl = _Slice(local, idx)
    m = np.asarray(start, dtype=float)
    if np.any(sl.slack(m) <= 0) or not sl.in_domain(m):
        raise DomainError("starting point is not strictly feasible")
    a0 = sl.area(m)
    mu = cfg.mu_start * a0
    its = 0
    while True:
        try:
            m, k = _newton_stage(sl, m, mu, cfg)
        except QuadratureFailure as exc:
            # on the sphere a flattening conic keeps a finite area, so the
            # minimising sequence can run into the degenerate boundary
            f = sl.full(m)
            raise DegenerateInput(
                f"enclosing conics degenerate (2x2 block {f[0]:.3g}, {f[1]:.3g}, {f[2]:.3g})"
            ) from exc
        its += k
        if mu <= cfg.mu_stop * a0:
            break
        mu /= cfg.mu_factor
    cand = _crossover(sl, m, mu)
    if cand is not None:
        m = cand
    s = sl.slack(m)
    rows = np.flatnonzero(s <= cfg.active_tol)
    kkt, _ = _nnls_residual(sl, m, rows)
    return sl.full(m), its, kkt


def _default_start(local, idx):
    x, y, z = local.T
    if np.min(np.abs(z)) < POLAR_TOL:
        raise Infeasible("a point lies on the polar line of the center")
    rr = x * x + y * y
    pos = rr > 0
    kappa = 0.5 * float(np.min(z[pos] ** 2 / rr[pos])) if np.any(pos) else 1.0
    return np.array([kappa, 0.0, kappa])[idx]


def _result(ps, conic, mode, its, kkt, cfg, **kw):
    area = area_from_eigenvalues(conic.nu1, conic.nu2, -1.0, 1e-12).area
    m = conic.matrix
    vals = np.einsum("ni,ij,nj->n", ps.vectors, m, ps.vectors)
    if np.max(vals) > cfg.feasibility_tol:
        raise Infeasible(f"solution violates enclosure by {np.max(vals):.3g}")
    active = tuple(int(i) for i in np.flatnonzero(np.abs(vals) <= cfg.active_tol))
    return SolveResult(conic=conic, area=area, active_points=active, mode=mode,
                       iterations=its, kkt_residual=kkt, **kw)


def _local_start(start, r, idx):
    if start is None:
        return None
    loc = r.T @ np.asarray(start.matrix if isinstance(start, Conic) else start, dtype=float) @ r
    loc = loc / -loc[2, 2]
    off = max(abs(loc[0, 2]), abs(loc[1, 2]))
    if off > 1e-9 or (1 not in idx and abs(loc[0, 1]) > 1e-9):
        raise DomainError("start conic does not lie in the admissible slice")
    return np.array([loc[0, 0], loc[0, 1], loc[1, 1]])[idx]


def solve_fixed_axes(ps, frame, config=None, start=None):
    """Minimal-area enclosing conic with axes along the columns of ``frame``.

    Parameters
    ----------
    ps : PointSet or sequence of points
    frame : unit quaternion or 3x3 rotation matrix
        Column 3 is the center, columns 1 and 2 the axis directions.
    start : Conic or matrix, optional
        A strictly feasible conic of the admissible family to start from.
    """
    cfg = config or SolverConfig()
    ps = _as_pointset(ps)
    r = np.asarray(frame, dtype=float)
    r = r if r.shape == (3, 3) else quaternion_rotation(frame)
    local = ps.vectors @ r
    idx = [0, 2]
    x0 = _default_start(local, idx) if start is None else _local_start(start, r, idx)
    f, its, kkt = _solve_slice(local, idx, x0, cfg)
    conic = normalize_conic(r @ np.diag([f[0], f[2], -1.0]) @ r.T)
    return _result(ps, conic, Mode.FIXED_AXES, its, kkt, cfg)


def _fixed_center(ps, center, cfg, start=None):
    c = np.asarray(list(center), dtype=float)
    r = frame_from_center(c / np.linalg.norm(c))
    local = ps.vectors @ r
    idx = [0, 1, 2]
    x0 = _default_start(local, idx) if start is None else _local_start(start, r, idx)
    f, its, kkt = _solve_slice(local, idx, x0, cfg)
    m = np.array([[f[0], f[1], 0.0], [f[1], f[2], 0.0], [0.0, 0.0, -1.0]])
    conic = normalize_conic(r @ m @ r.T)
    return _result(ps, conic, Mode.FIXED_CENTER, its, kkt, cfg)


def solve_fixed_center(ps, center, config=None, start=None):
    """Minimal-area enclosing conic with the given center.

    Raises
    ------
    CenterOutsideHull
        If ``center`` is not strictly inside the spherical convex hull of
        the representatives on its side.
    """
    cfg = config or SolverConfig()
    ps = _as_pointset(ps)
    try:
        hull = spherical_hull(ps.vectors, toward=center)
    except Unbounded as exc:
        raise CenterOutsideHull(str(exc)) from exc
    if not hull.contains(list(center), tol=1e-12):
        raise CenterOutsideHull("center is not strictly inside the convex hull")
    return _fixed_center(ps, center, cfg, start)


# ---------------------------------------------------------------------------
# minimal enclosing circle


def min_enclosing_circle(ps):
    """Smallest circle (cap) containing the point set: ``(center, radius)``."""
    ps = _as_pointset(ps)
    return SpherePoint.from_vector(ps.cap.center), float(ps.cap.radius)


# ---------------------------------------------------------------------------
# general mode


def _general_matrix(x):
    return np.array([[x[0], x[1], x[3]], [x[1], x[2], x[4]], [x[3], x[4], -1.0]])


def _polish(ps, conic, cfg):
    """Local refinement over all five entries of the conic in its own frame."""
    r = conic.rotation
    local = ps.vectors @ r
    x, y, z = local.T
    a = np.column_stack([x * x, 2 * x * y, y * y, 2 * x * z, 2 * y * z])
    b = z * z
    loc = r.T @ conic.matrix @ r
    scale = max(abs(loc[0, 0]), abs(loc[1, 1]))
    x0 = np.array([loc[0, 0], loc[0, 1], loc[1, 1], loc[0, 2], loc[1, 2]]) / scale
    a0 = area_from_eigenvalues(conic.nu1, conic.nu2, -1.0).area
    basis = [np.zeros((3, 3)) for _ in range(5)]
    for k, (i, j) in enumerate([(0, 0), (0, 1), (1, 1), (0, 2), (1, 2)]):
        basis[k][i, j] = basis[k][j, i] = 1.0

    def fun(xs):
        m = _general_matrix(xs * scale)
        w, v = np.linalg.eigh(m)
        if not (w[0] < 0 < w[1]):
            return 10.0, np.zeros(5)
        nu = w[::-1]
        area = area_from_eigenvalues(nu[0], nu[1], nu[2], 1e-13).area
        gn = area_gradient3(nu[0], nu[1], nu[2], 1e-13)
        vv = v[:, ::-1]
        gm = sum(gn[i] * np.outer(vv[:, i], vv[:, i]) for i in range(3))
        grad = np.array([np.sum(gm * e) for e in basis]) * scale
        return area / a0, grad / a0

    cons = {"type": "ineq", "fun": lambda xs: (b - a @ (xs * scale)) / scale,
            "jac": lambda xs: -a}
    res = minimize(fun, x0, jac=True, method="SLSQP", constraints=[cons],
                   options={"ftol": 1e-15, "maxiter": 300})
    try:
        polished = normalize_conic(r @ _general_matrix(res.x * scale) @ r.T)
    except NotAConic:
        return None
    return polished


def _seed_centers(ps, hull, cfg):
    rng = np.random.default_rng(cfg.seed)
    c0 = ps.cap.center
    if np.dot(c0, hull.axis) < 0:
        c0 = -c0
    seeds = [c0]
    pts = hull.points
    for _ in range(cfg.multistart_count):
        w = rng.dirichlet(np.ones(len(pts)))
        c = 0.5 * c0 + 0.5 * (w @ pts)
        seeds.append(c / np.linalg.norm(c))
    return seeds


def _run_start(ps, hull, seed, cfg):
    res = _fixed_center(ps, seed, cfg)
    its = res.iterations
    for _ in range(cfg.polish_rounds):
        pol = _polish(ps, res.conic, cfg)
        if pol is None:
            break
        c_new = pol.center.vector
        if not hull.contains(c_new, tol=1e-12):
            break
        try:
            nxt = _fixed_center(ps, c_new, cfg)
        except (Infeasible, DegenerateInput):
            break
        its += nxt.iterations
        moved = np.linalg.norm(nxt.conic.matrix - res.conic.matrix)
        if nxt.area <= res.area + 1e-15:
            res = nxt
        if moved < 1e-12:
            break
    return replace(res, iterations=its)


def _tiebreak_key(res):
    c = res.conic.center.vector
    return (res.conic.nu1, res.conic.nu2, c[0], c[1], c[2])


def solve_general(ps, config=None):
    """Minimal-area enclosing conic without restrictions (multistart search).

    Every start runs a fixed-center solve followed by alternating local
    polishes and fixed-center re-solves.  The lowest area wins (ties within
    1e-10 are broken lexicographically on ``(nu1, nu2, center)``).  The
    result carries a uniqueness certificate and ``agreement``, the largest
    Frobenius distance between the winning matrix and any start's matrix.

    Raises
    ------
    NoConvergence
        If the certificate is Unique but the starts disagree by more than
        ``config.agreement_tol``; the best result is attached.
    """
    cfg = config or SolverConfig()
    ps = _as_pointset(ps)
    hull = spherical_hull(ps.vectors)
    results = [_run_start(ps, hull, s, cfg) for s in _seed_centers(ps, hull, cfg)]
    lowest = min(r.area for r in results)
    tied = [r for r in results if r.area <= lowest + 1e-10]
    best = min(tied, key=_tiebreak_key)
    agreement = max(float(np.linalg.norm(r.conic.matrix - best.conic.matrix)) for r in results)
    rho = inscribed_circle_radius(ps.vectors)
    cert = certify(best.conic, rho, rho_source="inscribed_circle_radius")
    out = replace(best, mode=Mode.GENERAL, certificate=cert, agreement=agreement,
                  iterations=sum(r.iterations for r in results), starts=len(results))
    if cert.verdict.value == "Unique" and agreement > cfg.agreement_tol:
        out = replace(out, converged=False)
        raise NoConvergence(f"starts disagree by {agreement:.3g}", result=out)
    return out


def active_points(result, ps, tol=1e-7):
    """Indices of points with ``|p^T M p| <= tol`` for the result conic."""
    ps = _as_pointset(ps)
    m = result.conic.matrix
    vals = np.einsum("ni,ij,nj->n", ps.vectors, m, ps.vectors)
    return tuple(int(i) for i in np.flatnonzero(np.abs(vals) <= tol))


@dataclass(frozen=True)
class EnclosureProblem:
    """A point set plus a solver mode and its argument."""

    points: PointSet
    mode: Mode = Mode.GENERAL
    frame: object = None
    center: object = None
    config: SolverConfig = field(default_factory=SolverConfig)

    def solve(self):
        if self.mode == Mode.FIXED_AXES:
            return solve_fixed_axes(self.points, self.frame, self.config)
        if self.mode == Mode.FIXED_CENTER:
            return solve_fixed_center(self.points, self.center, self.config)
        return solve_general(self.points, self.config)


__all__ = [
    "Mode", "PointSet", "SolverConfig", "SolveResult", "EnclosureProblem",
    "min_enclosing_circle", "solve_fixed_axes", "solve_fixed_center",
    "solve_general", "active_points", "rotation_quaternion",
]
