"""Linear algebra of conic matrices on the unit sphere.

A conic is the intersection of the unit sphere with the quadratic cone
``x^T M x = 0``.  Matrices are normalised so that the single negative
eigenvalue equals -1; the interior is then ``x^T M x < 0``.
"""

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from .errors import DomainError, NonUnitQuaternion, NotAConic

CIRCLE_RTOL = 1e-9
SIGNATURE_TOL = 1e-10


def canonical_sign(x, y, z):
    """Return +1 or -1 so that the scaled vector is the canonical antipode.

    The canonical representative has z > 0, or z == 0 and y > 0, or
    z == y == 0 and x > 0.
    """
    if z > 0 or (z == 0 and (y > 0 or (y == 0 and x > 0))):
        return 1.0
    return -1.0


def canonicalize(v):
    v = np.asarray(v, dtype=float)
    return v * canonical_sign(*v)


@dataclass(frozen=True)
class SpherePoint:
    """A point of the elliptic plane, stored as its canonical unit vector."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        x, y, z = float(self.x), float(self.y), float(self.z)
        n = math.sqrt(x * x + y * y + z * z)
        if not math.isfinite(n) or n == 0.0:
            raise DomainError(f"cannot build a sphere point from ({x}, {y}, {z})")
        if abs(n - 1.0) > 1e-15:
            x, y, z = x / n, y / n, z / n
        s = canonical_sign(x, y, z)
        object.__setattr__(self, "x", s * x + 0.0)
        object.__setattr__(self, "y", s * y + 0.0)
        object.__setattr__(self, "z", s * z + 0.0)

    @classmethod
    def from_vector(cls, v):
        v = np.asarray(v, dtype=float).ravel()
        if v.shape != (3,):
            raise DomainError(f"expected a 3-vector, got shape {v.shape}")
        return cls(v[0], v[1], v[2])

    @property
    def vector(self):
        return np.array([self.x, self.y, self.z])

    def angle_to(self, other):
        """Elliptic distance in radians (antipodes identified), in [0, pi/2]."""
        d = abs(float(self.vector @ _vec(other)))
        return math.acos(min(1.0, d))

    def __iter__(self):
        return iter((self.x, self.y, self.z))


def _vec(p):
    if isinstance(p, SpherePoint):
        return p.vector
    return np.asarray(p, dtype=float)


@dataclass(frozen=True)
class SymMat3:
    """Symmetric 3x3 matrix stored by its six independent entries."""

    m11: float
    m12: float
    m13: float
    m22: float
    m23: float
    m33: float

    @classmethod
    def from_array(cls, a, rtol=1e-10):
        a = np.asarray(a, dtype=float)
        if a.shape != (3, 3):
            raise DomainError(f"expected a 3x3 matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DomainError("matrix entries must be finite")
        skew = np.max(np.abs(a - a.T))
        if skew > rtol * max(1.0, np.max(np.abs(a))):
            raise DomainError(f"matrix is not symmetric (skew part {skew:.3g})")
        s = 0.5 * (a + a.T)
        return cls(s[0, 0], s[0, 1], s[0, 2], s[1, 1], s[1, 2], s[2, 2])

    @classmethod
    def diag(cls, d1, d2, d3):
        return cls(d1, 0.0, 0.0, d2, 0.0, d3)

    @property
    def array(self):
        return np.array([
            [self.m11, self.m12, self.m13],
            [self.m12, self.m22, self.m23],
            [self.m13, self.m23, self.m33],
        ])

    def quadratic(self, p):
        p = _vec(p)
        return float(p @ self.array @ p)


def as_array(m):
    """Coerce a SymMat3, Conic or array-like to a symmetric ndarray."""
    if isinstance(m, SymMat3):
        return m.array
    if isinstance(m, Conic):
        return m.matrix
    return SymMat3.from_array(m).array


def quaternion_rotation(q):
    """Rotation matrix of a unit quaternion ``(q0, q1, q2, q3)``.

    Rotation by angle theta about unit axis u corresponds to
    ``q = (cos(theta/2), sin(theta/2) u)``.  Quaternions within 1e-6 of unit
    length are renormalised; others raise NonUnitQuaternion.
    """
    q = np.asarray(q, dtype=float).ravel()
    if q.shape != (4,):
        raise DomainError(f"expected 4 quaternion components, got {q.shape}")
    n = math.sqrt(float(q @ q))
    if abs(n - 1.0) > 1e-6:
        raise NonUnitQuaternion(f"|q| = {n!r} is not 1")
    q0, q1, q2, q3 = q / n
    return np.array([
        [q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3, 2 * (q1 * q2 - q0 * q3), 2 * (q1 * q3 + q0 * q2)],
        [2 * (q1 * q2 + q0 * q3), q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3, 2 * (q2 * q3 - q0 * q1)],
        [2 * (q1 * q3 - q0 * q2), 2 * (q2 * q3 + q0 * q1), q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3],
    ])


def rotation_quaternion(r):
    """Unit quaternion (with q0 >= 0) of a rotation matrix (Shepperd's method)."""
    r = np.asarray(r, dtype=float)
    tr = r[0, 0] + r[1, 1] + r[2, 2]
    k = int(np.argmax([tr, r[0, 0], r[1, 1], r[2, 2]]))
    if k == 0:
        s = 2.0 * math.sqrt(1.0 + tr)
        q = [0.25 * s, (r[2, 1] - r[1, 2]) / s, (r[0, 2] - r[2, 0]) / s, (r[1, 0] - r[0, 1]) / s]
    elif k == 1:
        s = 2.0 * math.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2])
        q = [(r[2, 1] - r[1, 2]) / s, 0.25 * s, (r[0, 1] + r[1, 0]) / s, (r[0, 2] + r[2, 0]) / s]
    elif k == 2:
        s = 2.0 * math.sqrt(1.0 + r[1, 1] - r[0, 0] - r[2, 2])
        q = [(r[0, 2] - r[2, 0]) / s, (r[0, 1] + r[1, 0]) / s, 0.25 * s, (r[1, 2] + r[2, 1]) / s]
    else:
        s = 2.0 * math.sqrt(1.0 + r[2, 2] - r[0, 0] - r[1, 1])
        q = [(r[1, 0] - r[0, 1]) / s, (r[0, 2] + r[2, 0]) / s, (r[1, 2] + r[2, 1]) / s, 0.25 * s]
    q = np.array(q)
    q /= np.linalg.norm(q)
    if q[0] < 0:
        q = -q
    return tuple(float(v) for v in q)


def axis_angle_quaternion(axis, angle):
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    s = math.sin(0.5 * angle)
    return (math.cos(0.5 * angle), s * axis[0], s * axis[1], s * axis[2])


def pole_quaternion(c):
    """Minimal-angle rotation carrying (0, 0, 1) to the unit vector ``c``."""
    c = _vec(c)
    c = c / np.linalg.norm(c)
    q = np.array([1.0 + c[2], -c[1], c[0], 0.0])
    n = np.linalg.norm(q)
    if n < 1e-12:
        # c is the south pole: half-turn about the x axis
        return (0.0, 1.0, 0.0, 0.0)
    return tuple(float(v) for v in q / n)


def frame_from_center(c):
    """Rotation matrix whose third column is ``c``."""
    return quaternion_rotation(pole_quaternion(c))


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in decreasing order with canonical unit eigenvectors."""

    values: tuple
    vectors: tuple

    @property
    def basis(self):
        """Matrix with the eigenvectors as columns."""
        return np.column_stack([v.vector for v in self.vectors])


def _jacobi3(a):
    """Cyclic Jacobi on a 3x3 symmetric list-of-lists; returns (diag, V)."""
    a = [row[:] for row in a]
    v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    scale = math.sqrt(sum(a[i][j] * a[i][j] for i in range(3) for j in range(3)))
    for _ in range(30):
        off = math.sqrt(2.0 * (a[0][1] ** 2 + a[0][2] ** 2 + a[1][2] ** 2))
        if off <= 1e-14 * scale or off == 0.0:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            apq = a[p][q]
            if apq == 0.0:
                continue
            theta = (a[q][q] - a[p][p]) / (2.0 * apq)
            t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            for k in range(3):
                akp, akq = a[k][p], a[k][q]
                a[k][p] = c * akp - s * akq
                a[k][q] = s * akp + c * akq
            for k in range(3):
                apk, aqk = a[p][k], a[q][k]
                a[p][k] = c * apk - s * aqk
                a[q][k] = s * apk + c * aqk
            a[p][q] = a[q][p] = 0.0
            for k in range(3):
                vkp, vkq = v[k][p], v[k][q]
                v[k][p] = c * vkp - s * vkq
                v[k][q] = s * vkp + c * vkq
    return [a[0][0], a[1][1], a[2][2]], v


def eigen_sym3(m):
    """Ordered eigen-decomposition of a symmetric 3x3 matrix.

    Cyclic Jacobi sweeps (at most 30) until the off-diagonal Frobenius norm
    drops below 1e-14 times the matrix norm.  Eigenvectors are returned as
    canonical SpherePoints.
    """
    a = as_array(m)
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    d, v = _jacobi3(a.tolist())
    order = sorted(range(3), key=lambda i: -d[i])
    values = tuple(float(d[i]) for i in order)
    vectors = tuple(SpherePoint(v[0][i], v[1][i], v[2][i]) for i in order)
    return EigenDecomposition(values, vectors)


def signature(values, tol=SIGNATURE_TOL):
    big = max(abs(x) for x in values)
    pos = sum(1 for x in values if x > tol * big)
    neg = sum(1 for x in values if x < -tol * big)
    return pos, neg


@dataclass(frozen=True)
class Conic:
    """Normalised conic: ``Q diag(nu1, nu2, -1) Q^T`` with ``nu1 >= nu2 > 0``.

    ``q`` is the unit quaternion of the rotation Q; its third column is the
    center of the conic.
    """

    nu1: float
    nu2: float
    q: tuple = (1.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        nu1, nu2 = float(self.nu1), float(self.nu2)
        if not (math.isfinite(nu1) and math.isfinite(nu2)) or nu2 <= 0 or nu1 < nu2:
            raise DomainError(f"need nu1 >= nu2 > 0, got ({nu1}, {nu2})")
        q = np.asarray(self.q, dtype=float).ravel()
        n = math.sqrt(float(q @ q)) if q.shape == (4,) else float("nan")
        if not abs(n - 1.0) <= 1e-6:
            raise NonUnitQuaternion(f"|q| = {n!r} is not 1")
        object.__setattr__(self, "nu1", nu1)
        object.__setattr__(self, "nu2", nu2)
        object.__setattr__(self, "q", tuple(float(v) for v in q / n))

    @classmethod
    def from_matrix(cls, m):
        return normalize_conic(m)

    @classmethod
    def from_axes(cls, a, b, q=(1.0, 0.0, 0.0, 0.0)):
        """Conic with semi-axis tangents ``a >= b`` (major along the frame's y axis)."""
        if not (a >= b > 0):
            raise DomainError(f"need a >= b > 0, got ({a}, {b})")
        return cls(1.0 / (b * b), 1.0 / (a * a), q)

    @classmethod
    def circle(cls, radius, center=(0.0, 0.0, 1.0)):
        """Circle of angular radius ``radius`` (0 < radius < pi/2)."""
        if not 0 < radius < math.pi / 2:
            raise DomainError(f"circle radius must lie in (0, pi/2), got {radius}")
        nu = 1.0 / math.tan(radius) ** 2
        return cls(nu, nu, pole_quaternion(SpherePoint.from_vector(center).vector))

    @property
    def rotation(self):
        return quaternion_rotation(self.q)

    @property
    def matrix(self):
        r = self.rotation
        return r @ np.diag([self.nu1, self.nu2, -1.0]) @ r.T

    @property
    def symmat(self):
        return SymMat3.from_array(self.matrix)

    @property
    def center(self):
        return SpherePoint.from_vector(self.rotation[:, 2])

    @property
    def is_circle(self):
        return self.nu1 - self.nu2 <= CIRCLE_RTOL * self.nu1

    def value(self, p):
        """``p^T M p`` for a unit vector p (negative inside)."""
        p = _vec(p)
        return float(p @ self.matrix @ p)


def normalize_conic(m):
    """Scale a signature-(2,1) matrix to ``nu3 = -1`` and extract its frame.

    Raises NotAConic when the signature is not (2, 1).
    """
    eig = eigen_sym3(m)
    nu = eig.values
    if signature(nu) != (2, 1):
        raise NotAConic(f"eigenvalues {nu} do not have signature (2, 1)")
    s = -1.0 / nu[2]
    nu1, nu2 = s * nu[0], s * nu[1]
    center = eig.vectors[2].vector
    if nu1 - nu2 <= CIRCLE_RTOL * nu1:
        q = pole_quaternion(center)
    else:
        v1, v2 = eig.vectors[0].vector, eig.vectors[1].vector
        if np.linalg.det(np.column_stack([v1, v2, center])) < 0:
            v1 = -v1
        q = rotation_quaternion(np.column_stack([v1, v2, center]))
    return Conic(nu1, nu2, q)


def semi_axes(c):
    """Return ``(a, b, alpha, beta)``: semi-axis tangents and angles, a >= b."""
    a = 1.0 / math.sqrt(c.nu2)
    b = 1.0 / math.sqrt(c.nu1)
    return a, b, math.atan(a), math.atan(b)


def center_and_axes(c):
    """Center plus major/minor axis directions (None for circles).

    The major axis passes through the eigenvector of ``nu2`` and the minor
    axis through the eigenvector of ``nu1``.
    """
    r = c.rotation
    center = SpherePoint.from_vector(r[:, 2])
    if c.is_circle:
        return center, None, None
    return center, SpherePoint.from_vector(r[:, 1]), SpherePoint.from_vector(r[:, 0])


class PointClass(str, Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    EXTERIOR = "Exterior"


def classify_point(c, p, tol=1e-9):
    if tol <= 0:
        raise DomainError("tol must be positive")
    val = c.value(p) if isinstance(c, Conic) else float(_vec(p) @ as_array(c) @ _vec(p))
    if abs(val) <= tol:
        return PointClass.BOUNDARY
    return PointClass.INTERIOR if val < 0 else PointClass.EXTERIOR


def half_turn(r):
    """Rotation matrix of the half-turn about the unit vector ``r``."""
    r = _vec(r)
    r = r / np.linalg.norm(r)
    return 2.0 * np.outer(r, r) - np.eye(3)


def rotation_z(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
