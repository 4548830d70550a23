"""In-between conics ``M_lam = (1 - lam) M0 + lam M1`` and area sweeps."""

from dataclasses import dataclass
import math

import numpy as np

from .area import area_from_eigenvalues
from .errors import DomainError, PreconditionViolated
from .geometry import SymMat3, normalize_conic

SWEEP_TOL = 1e-9


def _normalized(m):
    return normalize_conic(m).matrix


def common_interior_point(m0, m1, samples=201):
    """A point interior to both conics, or None.

    The centers are tried first; otherwise both geodesic arcs between the
    centers are scanned for the point minimising ``max(x^T M0 x, x^T M1 x)``.
    """
    a0, a1 = _normalized(m0), _normalized(m1)
    c0 = normalize_conic(a0).center.vector
    c1 = normalize_conic(a1).center.vector

    def worst(x):
        return max(x @ a0 @ x, x @ a1 @ x)

    for c in (c0, c1):
        if worst(c) < 0:
            return c
    best, best_val = None, math.inf
    s = np.linspace(0.0, 1.0, samples)[:, None]
    for sign in (1.0, -1.0):
        pts = (1.0 - s) * c0 + s * sign * c1
        pts /= np.linalg.norm(pts, axis=1)[:, None]
        vals = np.maximum(np.einsum("ni,ij,nj->n", pts, a0, pts),
                          np.einsum("ni,ij,nj->n", pts, a1, pts))
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best, best_val = pts[k], vals[k]
    return best if best_val < 0 else None


def blend_matrix(m0, m1, lam):
    """``(1 - lam) M0 + lam M1`` of the normalised matrices (no renormalisation)."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    return (1.0 - lam) * _normalized(m0) + lam * _normalized(m1)


def blend(m0, m1, lam):
    """In-between conic of two conics sharing an interior point.

    Both inputs are normalised to ``nu3 = -1`` before blending.

    Raises
    ------
    PreconditionViolated
        If no common interior point is found.
    NotAConic
        If the blend loses signature (2, 1).
    """
    if common_interior_point(m0, m1) is None:
        raise PreconditionViolated("conics have no common interior point")
    if lam == 0.0:
        return normalize_conic(m0)
    if lam == 1.0:
        return normalize_conic(m1)
    return normalize_conic(blend_matrix(m0, m1, lam))


@dataclass(frozen=True)
class BlendSweep:
    """Areas of in-between conics along a grid of ``lam`` values.

    ``nus`` holds the normalised ``(nu1, nu2)`` per ``lam`` and
    ``nu3_prenorm`` the smallest eigenvalue of the raw blend.
    """

    lambdas: np.ndarray
    areas: np.ndarray
    area0: float
    area1: float
    all_above_endpoints: bool
    all_below_endpoints: bool
    nus: np.ndarray
    nu3_prenorm: np.ndarray

    def rows(self):
        for lam, (n1, n2), n3, a in zip(self.lambdas, self.nus, self.nu3_prenorm, self.areas):
            yield float(lam), float(n1), float(n2), float(n3), float(a)


def _conic_area(nu, tol):
    return area_from_eigenvalues(nu[0], nu[1], nu[2], tol).area


def sweep(m0, m1, grid, tol=1e-12):
    """Area of ``C_lam`` for each ``lam`` in ``grid``."""
    if common_interior_point(m0, m1) is None:
        raise PreconditionViolated("conics have no common interior point")
    lambdas = np.asarray(grid, dtype=float)
    a0, a1 = _normalized(m0), _normalized(m1)
    area0 = _conic_area(np.sort(np.linalg.eigvalsh(a0))[::-1], tol)
    area1 = _conic_area(np.sort(np.linalg.eigvalsh(a1))[::-1], tol)
    areas, nus, nu3 = [], [], []
    for lam in lambdas:
        c = normalize_conic(blend_matrix(a0, a1, lam))
        raw = np.sort(np.linalg.eigvalsh((1.0 - lam) * a0 + lam * a1))[::-1]
        areas.append(_conic_area((c.nu1, c.nu2, -1.0), tol))
        nus.append((c.nu1, c.nu2))
        nu3.append(raw[2])
    areas = np.array(areas)
    hi, lo = max(area0, area1), min(area0, area1)
    return BlendSweep(
        lambdas=lambdas,
        areas=areas,
        area0=area0,
        area1=area1,
        all_above_endpoints=bool(np.all(areas - hi > SWEEP_TOL)),
        all_below_endpoints=bool(np.all(lo - areas > SWEEP_TOL)),
        nus=np.array(nus).reshape(-1, 2),
        nu3_prenorm=np.array(nu3),
    )


def _rx(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def _ry(a):
    # sign pattern as used by the fixture: [[c, 0, -s], [0, 1, 0], [s, 0, c]]
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def _rz(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def example1_rotations():
    """The three rotations whose product carries ``C0`` to ``C1``."""
    return _rx(math.pi / 60), _ry(math.pi / 36), _rz(math.pi / 6)


def example1_fixture():
    """Two congruent conics whose in-between conics are all larger.

    ``M0 = diag(1/16, 1/36, -1)`` and ``M1 = R M0 R^T`` with
    ``R = R1 R2 R3``.
    """
    m0 = np.diag([1.0 / 16.0, 1.0 / 36.0, -1.0])
    r1, r2, r3 = example1_rotations()
    r = r1 @ r2 @ r3
    m1 = r @ m0 @ r.T
    return SymMat3.from_array(m0), SymMat3.from_array(0.5 * (m1 + m1.T))


def example1_grid(n):
    """``n`` equally spaced interior values ``k / (n + 1)``."""
    if n < 1:
        raise DomainError("grid size must be positive")
    return np.arange(1, n + 1) / (n + 1.0)


__all__ = [
    "BlendSweep", "blend", "blend_matrix", "common_interior_point", "sweep",
    "example1_fixture", "example1_rotations", "example1_grid",
]
