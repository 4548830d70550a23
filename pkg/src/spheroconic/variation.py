"""First variation of the area along a blend of two conics.

For normalised matrices ``M0`` and ``M1`` the blend ``M_lam = (1-lam) M0 +
lam M1`` defines a one-parameter family of conics.  This module computes
``d area / d lam`` at ``lam = 0`` in several independent ways:

* the chain rule through the eigenvalue rates of ``M_lam``,
* a quadrature in the normal frame of ``C0``,
* a closed form in complete elliptic integrals,
* closed forms for a concentric ``C1`` (``rate_coaxial``) and for a
  half-turned copy of it (``rate_halfturn``).

The difference of the last two, after the substitution
``zeta = 2 arctan t``, is a quartic whose Bernstein coefficients are
returned by ``bernstein_coefficients``.
"""

from dataclasses import dataclass
from math import comb
import math

import numpy as np

from .area import area_gradient3, elliptic_KE, modulus_f
from .errors import DegenerateSpectrum, DomainError, PreconditionViolated
from .geometry import as_array, half_turn, normalize_conic, rotation_z
from .quadrature import gauss_kronrod

GAP_TOL = 1e-8


def adjugate3(a):
    """Adjugate of a 3x3 matrix (columns are cross products of rows)."""
    a = np.asarray(a, dtype=float)
    return np.column_stack([np.cross(a[1], a[2]), np.cross(a[2], a[0]), np.cross(a[0], a[1])])


def eigenvalue_rates(m0, m1):
    """``d nu_i / d lam`` at ``lam = 0`` for ``M_lam = (1-lam) M0 + lam M1``.

    Implicit differentiation of ``det(M_lam - nu I) = 0`` gives
    ``nu_i' = tr(adj(M0 - nu_i I) (M1 - M0)) / tr(adj(M0 - nu_i I))``.

    Raises
    ------
    DegenerateSpectrum
        If two eigenvalues of ``M0`` are closer than ``1e-8``.
    """
    a0, a1 = as_array(m0), as_array(m1)
    nu = np.sort(np.linalg.eigvalsh(a0))[::-1]
    if np.min(np.abs(np.diff(nu))) < GAP_TOL:
        raise DegenerateSpectrum(f"eigenvalues {nu} are not simple")
    d = a1 - a0
    rates = []
    for v in nu:
        adj = adjugate3(a0 - v * np.eye(3))
        rates.append(float(np.sum(adj * d) / np.trace(adj)))
    return tuple(rates)


def normal_position(m0, m1):
    """Normalise ``M0`` and express ``M1`` in the eigenframe of ``C0``.

    Returns ``(c0, m1_local)`` where ``c0`` is the Conic of ``M0`` and
    ``m1_local = Q^T M1 Q`` with ``Q`` the rotation of ``c0``.
    """
    c0 = normalize_conic(m0)
    q = c0.rotation
    return c0, q.T @ as_array(m1) @ q


def _gapped(nu01, nu02):
    if not (nu02 > 0 and math.isfinite(nu01)):
        raise DomainError(f"need nu01 > nu02 > 0, got ({nu01}, {nu02})")
    if nu01 - nu02 < GAP_TOL:
        raise DegenerateSpectrum(f"nu01 - nu02 = {nu01 - nu02} is below {GAP_TOL}")


def _local_diagonal(c0, m1):
    q = c0.rotation
    return np.diag(q.T @ as_array(m1) @ q)


def rate_integral(c0, m1, tol=1e-12):
    """Area rate at ``lam = 0`` by quadrature in the normal frame of ``c0``.

    Only the diagonal ``s`` of ``M1`` in that frame enters::

        -1/2 int_{-pi}^{pi} [sin^2 (s1 + nu01 s3) + cos^2 (s2 + nu02 s3)] / N,
        N = sqrt(g) (1 + g)^{3/2},  g = nu01 sin^2 + nu02 cos^2.

    ``m1`` is given in world coordinates; if ``c0`` is in normal position
    (identity orientation) no rotation takes place.
    """
    n01, n02 = c0.nu1, c0.nu2
    _gapped(n01, n02)
    s1, s2, s3 = _local_diagonal(c0, m1)
    k1, k2 = s1 + n01 * s3, s2 + n02 * s3

    def f(phi):
        sn = np.sin(phi) ** 2
        cs = 1.0 - sn
        g = n01 * sn + n02 * cs
        return (sn * k1 + cs * k2) / (np.sqrt(g) * (1.0 + g) ** 1.5)

    val, _ = gauss_kronrod(f, 0.0, 0.5 * math.pi, epsabs=tol / 4.0)
    return -2.0 * float(val)


def rate_elliptic(c0, m1):
    """Closed form of ``rate_integral`` in complete elliptic integrals.

    With ``s`` the diagonal of ``M1`` in the frame of ``c0``::

        2/N1 [ (1+nu01)(nu02 s1 - nu01 s2) K
               - nu01 (nu01 (s3 - s2) + nu02 (s1 - s3) + s1 - s2) E ].
    """
    n01, n02 = c0.nu1, c0.nu2
    _gapped(n01, n02)
    s1, s2, s3 = _local_diagonal(c0, m1)
    ke = elliptic_KE(modulus_f(n01, n02))
    n1 = math.sqrt(n01 * (1.0 + n02)) * (n01 - n02) * (1.0 + n01)
    t_k = (1.0 + n01) * (n02 * s1 - n01 * s2) * ke.K
    t_e = n01 * (n01 * (s3 - s2) + n02 * (s1 - s3) + s1 - s2) * ke.E
    return 2.0 * (t_k - t_e) / n1


def rate_chain(m0, m1, tol=1e-12):
    """Area rate from the area gradient and ``eigenvalue_rates``."""
    a0 = as_array(m0)
    nu = np.sort(np.linalg.eigvalsh(a0))[::-1]
    grad = area_gradient3(nu[0], nu[1], nu[2], tol)
    return float(np.dot(grad, eigenvalue_rates(a0, m1)))


@dataclass(frozen=True)
class ABCCoefficients:
    """Coefficients of the concentric and half-turn rate formulas."""

    A: float
    B: float
    C: float
    N1: float
    nu01: float
    nu02: float


def abc_arrays(nu01, nu02):
    """Vectorised ``(A, B, C, N1)``; no domain checks."""
    nu01 = np.asarray(nu01, dtype=float)
    nu02 = np.asarray(nu02, dtype=float)
    f = np.sqrt((nu01 - nu02) / (nu01 * (1.0 + nu02)))
    K, E, EmK = elliptic_KE(f) if f.ndim else _scalar_ke(f)
    n1 = np.sqrt(nu01 * (1.0 + nu02)) * (nu01 - nu02) * (1.0 + nu01)
    a = 2.0 * nu01 * (1.0 + nu01) * EmK
    b = -2.0 * nu01 * (nu01 - nu02) * E
    c = 2.0 * (1.0 + nu01) * nu02 * K - 2.0 * nu01 * (1.0 + nu02) * E
    return a, b, c, n1


def _scalar_ke(f):
    ke = elliptic_KE(float(f))
    return ke.K, ke.E, ke.E_minus_K


def abc_coefficients(nu01, nu02):
    """A, B, C and N1 at ``nu01 > nu02 > 0``.

    ``A = 2 nu01 (1+nu01)(E - K)``, ``B = -2 nu01 (nu01 - nu02) E``,
    ``C = 2 (1+nu01) nu02 K - 2 nu01 (1+nu02) E`` and
    ``N1 = sqrt(nu01 (1+nu02)) (nu01 - nu02)(1 + nu01)``, with ``K``, ``E``
    at modulus ``modulus_f(nu01, nu02)``.
    """
    _gapped(nu01, nu02)
    a, b, c, n1 = abc_arrays(nu01, nu02)
    return ABCCoefficients(float(a), float(b), float(c), float(n1), float(nu01), float(nu02))


def _check_pairs(nu0, nu1):
    n01, n02 = map(float, nu0)
    n11, n12 = map(float, nu1)
    _gapped(n01, n02)
    if not (n11 >= n12 > 0):
        raise DomainError(f"need nu11 >= nu12 > 0, got ({n11}, {n12})")
    return abc_coefficients(n01, n02), n11, n12


def _check_axis(r):
    r = np.asarray(list(r), dtype=float)
    if r.shape != (3,) or abs(np.linalg.norm(r) - 1.0) > 1e-9:
        raise DomainError("r must be a unit 3-vector")
    if r[2] ** 2 - r[0] ** 2 < -1e-12:
        raise PreconditionViolated(f"half-turn axis {r} violates r3^2 >= r1^2")
    return r


def rate_coaxial(nu0, nu1, zeta):
    """Area rate towards ``Rz(zeta) diag(nu11, nu12, -1) Rz(zeta)^T``.

    ``C0 = diag(nu01, nu02, -1)``; the target is concentric with it.
    """
    abc, n11, n12 = _check_pairs(nu0, nu1)
    s, c = math.sin(zeta) ** 2, math.cos(zeta) ** 2
    A, B, C = abc.A, abc.B, abc.C
    return ((A * s + C * c) * n11 + (A * c + C * s) * n12 - B) / abc.N1


def rate_halfturn(nu0, nu1, zeta, r):
    """Area rate towards the half-turn about ``r`` of the coaxial target.

    The target matrix is ``Q diag(nu11, nu12, -1) Q^T`` with
    ``Q = H(r) Rz(zeta)``.  Requires ``r3^2 >= r1^2``.
    """
    abc, a, b = _check_pairs(nu0, nu1)
    r1, r2, r3 = _check_axis(r)
    A, B, C = abc.A, abc.B, abc.C
    s, c = math.sin(zeta) ** 2, math.cos(zeta) ** 2
    cs = math.cos(zeta) * math.sin(zeta)
    t = ((A * s + C * c) * a + (A * c + C * s) * b - B) * (r1**4 + r2**4 + r3**4)
    t += ((-2 * C * c + 4 * C * s - 2 * A * s + 4 * A * c) * a
          + (-2 * C * s + 4 * C * c - 2 * A * c + 4 * A * s) * b - 2 * B) * r1**2 * r2**2
    t += ((4 * B * c - 2 * C * c + 2 * A * s) * a
          + (4 * B * s - 2 * C * s + 2 * A * c) * b + 2 * B - 4 * C) * r1**2 * r3**2
    t += ((-2 * A * s + 4 * B * s + 2 * C * c) * a
          + (-2 * A * c + 4 * B * c + 2 * C * s) * b - 4 * A + 2 * B) * r2**2 * r3**2
    t += 4 * cs * (A - C) * (a - b) * (r1 * r2**3 - r1**3 * r2)
    t += -4 * cs * (A + C - 2 * B) * (a - b) * r1 * r2 * r3**2
    return t / abc.N1


def halfturn_target(nu1, zeta, r):
    """World matrix of the half-turned target ``H(r) Rz(zeta) D Rz(zeta)^T H(r)``."""
    q = half_turn(r) @ rotation_z(zeta)
    return q @ np.diag([nu1[0], nu1[1], -1.0]) @ q.T


def halfturn_axis(center):
    """Mid-point of ``(0, 0, 1)`` and ``center`` with ``r1^2 + r2^2 <= r3^2``.

    Of the two mid-points ``normalize(e3 +- c)`` the one with the larger
    ``|r3|`` is returned, oriented with ``r3 > 0``.
    """
    c = np.asarray(list(center), dtype=float)
    c = c / np.linalg.norm(c)
    if c[2] < 0:
        c = -c
    r = c + np.array([0.0, 0.0, 1.0])
    return r / np.linalg.norm(r)


def bernstein_arrays(A, B, C, a, b, r1, r2, r3):
    """Vectorised Bernstein coefficients ``p0..p4`` (stacked on axis 0)."""
    S = (r1 * r1 + r2 * r2 + r3 * r3) ** 2 - 1.0
    d = a - b
    r12, r13, r23 = r1**2 * r2**2, r1**2 * r3**2, r2**2 * r3**2
    mixed = r1 * r2 * r3**2 * (2 * B - A - C) * d
    cubic = (r1 * r2**3 - r1**3 * r2) * (A - C) * d
    p0 = ((C * a + A * b - B) * S + 4 * r12 * (A - C) * d
          + 4 * r13 * (B - C) * (1 + a) + 4 * r23 * (B - A) * (1 + b))
    p1 = p0 + 2 * mixed + 2 * cubic
    p2 = (2 * ((A + C) * (a + b) - 2 * B) * S + 8 * r13 * (B - C) * (2 + a + b)
          + 8 * r23 * (B - A) * (2 + a + b) + 12 * mixed + 12 * cubic) / 3.0
    p3 = (2 * (A * a + C * b - B) * S + 8 * r12 * (C - A) * d
          + 8 * r13 * (B - C) * (1 + b) + 8 * r23 * (B - A) * (1 + a)
          + 4 * mixed + 4 * cubic)
    p4 = (4 * (A * a + C * b - B) * S + 16 * r12 * (C - A) * d
          + 16 * r13 * (B - C) * (1 + b) + 16 * r23 * (B - A) * (1 + a))
    return np.stack(np.broadcast_arrays(p0, p1, p2, p3, p4))


def bernstein_coefficients(nu0, nu1, r):
    """Bernstein coefficients of ``P(t) = N1 (1+t^2)^2 (halfturn - coaxial)``.

    ``zeta = 2 arctan t``; ``P`` is a quartic in ``t`` and
    ``P(t) = sum_i p_i B^4_i(t)``.
    """
    abc, a, b = _check_pairs(nu0, nu1)
    r1, r2, r3 = _check_axis(r)
    p = bernstein_arrays(abc.A, abc.B, abc.C, a, b, r1, r2, r3)
    return tuple(float(v) for v in p)


def bernstein_poly(p, t):
    """Evaluate ``sum_i p_i B^4_i(t)``."""
    t = np.asarray(t, dtype=float)
    return sum(comb(4, i) * (1.0 - t) ** (4 - i) * t**i * p[i] for i in range(5))


def cleared_difference(nu0, nu1, r, t):
    """``N1 (1+t^2)^2 (rate_halfturn - rate_coaxial)`` at ``zeta = 2 arctan t``."""
    abc = abc_coefficients(*nu0)
    zeta = 2.0 * math.atan(t)
    diff = rate_halfturn(nu0, nu1, zeta, r) - rate_coaxial(nu0, nu1, zeta)
    return abc.N1 * (1.0 + t * t) ** 2 * diff


@dataclass(frozen=True)
class VariationReport:
    """Area rate at ``lam = 0`` by several routes, plus half-turn data.

    ``zeta``, ``r``, ``nu1``, ``d_coaxial``, ``d_halfturn`` and
    ``bernstein`` describe ``C1`` as a half-turn of a concentric conic.
    """

    d_integral: float
    d_elliptic: float
    d_chain: float
    eigen_rates: tuple
    abc: ABCCoefficients
    nu1: tuple
    zeta: float
    r: tuple
    d_coaxial: float
    d_halfturn: float
    bernstein: tuple


def decompose_halfturn(c0, m1):
    """Write ``M1`` (world) as a half-turn of a conic concentric with ``c0``.

    Returns ``((nu11, nu12), zeta, r)`` in the normal frame of ``c0``.
    """
    q = c0.rotation
    local = q.T @ as_array(m1) @ q
    c1 = normalize_conic(local)
    r = halfturn_axis(c1.center)
    d1 = normalize_conic(half_turn(r) @ local @ half_turn(r))
    if d1.is_circle:
        zeta = 0.0
    else:
        v = d1.rotation[:, 0]
        zeta = math.atan2(v[1], v[0]) % math.pi
    return (c1.nu1, c1.nu2), zeta, tuple(float(x) for x in r)


def variation_report(m0, m1, tol=1e-12):
    """Compute every available form of the area rate for the blend of ``m0``, ``m1``."""
    c0 = normalize_conic(m0)
    a0 = c0.matrix
    a1 = normalize_conic(m1).matrix
    nu1, zeta, r = decompose_halfturn(c0, a1)
    nu0 = (c0.nu1, c0.nu2)
    return VariationReport(
        d_integral=rate_integral(c0, a1, tol),
        d_elliptic=rate_elliptic(c0, a1),
        d_chain=rate_chain(a0, a1, tol),
        eigen_rates=eigenvalue_rates(a0, a1),
        abc=abc_coefficients(*nu0),
        nu1=nu1,
        zeta=zeta,
        r=r,
        d_coaxial=rate_coaxial(nu0, nu1, zeta),
        d_halfturn=rate_halfturn(nu0, nu1, zeta, r),
        bernstein=bernstein_coefficients(nu0, nu1, r),
    )
