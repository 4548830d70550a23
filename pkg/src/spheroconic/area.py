"""Area of a sphero-conic and its derivatives.

The interior of ``diag(nu1, nu2, -1)`` (one nappe) has area

    2*pi - integral_{-pi}^{pi} sqrt(g / (1 + g)) dphi,
    g = nu1 sin^2(phi) + nu2 cos^2(phi),

which is evaluated by adaptive Gauss-Kronrod quadrature on a quarter
period.  Complete elliptic integrals are computed by the
arithmetic-geometric mean.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError
from .quadrature import gauss_kronrod

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class AreaValue:
    area: float
    error: float

    def __float__(self):
        return self.area


def _check_tol(tol):
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")


def _quarter(integrand, tol):
    val, err = gauss_kronrod(integrand, 0.0, HALF_PI, epsabs=tol / 4.0)
    return 4.0 * val, 4.0 * err


def area_from_axes(a, b, tol=1e-10):
    """Area of the conic with semi-axis tangents ``a`` and ``b``."""
    if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"semi-axis tangents must be positive, got ({a}, {b})")
    _check_tol(tol)
    a2, b2 = a * a, b * b

    def f(phi):
        s2 = np.sin(phi) ** 2
        h = a2 * s2 + b2 * (1.0 - s2)
        return np.sqrt(h / (a2 * b2 + h))

    val, err = _quarter(f, tol)
    return AreaValue(float(TWO_PI - val), float(err))


def area_from_eigenvalues(nu1, nu2, nu3, tol=1e-10):
    """Area from the (unnormalised) eigenvalues ``nu1 >= nu2 > 0 > nu3``."""
    if not (nu1 >= nu2 > 0 > nu3):
        raise DomainError(f"need nu1 >= nu2 > 0 > nu3, got ({nu1}, {nu2}, {nu3})")
    _check_tol(tol)
    neg = -nu3

    def f(phi):
        s2 = np.sin(phi) ** 2
        g = nu1 * s2 + nu2 * (1.0 - s2)
        return np.sqrt(g / (neg + g))

    val, err = _quarter(f, tol)
    return AreaValue(float(TWO_PI - val), float(err))


def _check_normalized(nu1, nu2):
    if not (nu1 >= nu2 > 0) or not math.isfinite(nu1):
        raise DomainError(f"need nu1 >= nu2 > 0, got ({nu1}, {nu2})")


def area_normalized(nu1, nu2, tol=1e-10):
    """Area of ``diag(nu1, nu2, -1)``; strictly decreasing in both arguments."""
    _check_normalized(nu1, nu2)
    _check_tol(tol)

    def f(phi):
        s2 = np.sin(phi) ** 2
        g = nu1 * s2 + nu2 * (1.0 - s2)
        return np.sqrt(g / (1.0 + g))

    val, err = _quarter(f, tol)
    return AreaValue(float(TWO_PI - val), float(err))


def area_gradient(nu1, nu2, tol=1e-12):
    """``(d area/d nu1, d area/d nu2)``; both components are negative."""
    _check_normalized(nu1, nu2)
    _check_tol(tol)

    def f(phi):
        s2 = np.sin(phi) ** 2
        c2 = 1.0 - s2
        g = nu1 * s2 + nu2 * c2
        w = 1.0 / (np.sqrt(g) * (1.0 + g) ** 1.5)
        return np.stack([s2 * w, c2 * w])

    val, _ = _quarter(f, tol)
    return -0.5 * float(val[0]), -0.5 * float(val[1])


def hessian_kernel(g):
    """``(1 + 4g) / (g^{3/2} (1 + g)^{5/2})``, the second-derivative weight."""
    return (1.0 + 4.0 * g) / (g ** 1.5 * (1.0 + g) ** 2.5)


def area_hessian(nu1, nu2, tol=1e-12):
    """2x2 Hessian of the normalised area in ``(nu1, nu2)``.

    Entries are ``(1/4) * integral J * w`` with weights ``sin^4``,
    ``sin^2 cos^2`` and ``cos^4``.
    """
    _check_normalized(nu1, nu2)
    _check_tol(tol)

    def f(phi):
        s2 = np.sin(phi) ** 2
        c2 = 1.0 - s2
        jk = hessian_kernel(nu1 * s2 + nu2 * c2)
        return np.stack([jk * s2 * s2, jk * s2 * c2, jk * c2 * c2])

    val, _ = _quarter(f, tol)
    h11, h12, h22 = 0.25 * val
    return np.array([[h11, h12], [h12, h22]])


def area_gradient3(nu1, nu2, nu3, tol=1e-12):
    """Partial derivatives of the area with respect to all three eigenvalues."""
    if not (nu1 >= nu2 > 0 > nu3):
        raise DomainError(f"need nu1 >= nu2 > 0 > nu3, got ({nu1}, {nu2}, {nu3})")
    s = -1.0 / nu3
    g1, g2 = area_gradient(nu1 * s, nu2 * s, tol)
    return g1 * s, g2 * s, (g1 * nu1 + g2 * nu2) * s * s


def area_quadratic_form(m11, m12, m22, order=0, epsabs=1e-14, epsrel=1e-12):
    """Area of the conic ``[[m11, m12, 0], [m12, m22, 0], [0, 0, -1]]``.

    The 2x2 block must be positive definite.  With ``u = (cos t, sin t)``
    the area is ``2 pi - int sqrt(g/(1+g))`` where ``g = u^T S u`` is linear
    in ``(m11, m12, m22)``, so the area is convex in these coordinates.

    Returns the area, and for ``order >= 1`` the gradient (3,), and for
    ``order >= 2`` the Hessian (3, 3), all in ``(m11, m12, m22)``.
    """
    det = m11 * m22 - m12 * m12
    if not (m11 > 0 and det > 0):
        raise DomainError("2x2 block is not positive definite")

    # principal form of g avoids cancellation for elongated blocks
    lam_hi = 0.5 * (m11 + m22) + math.hypot(0.5 * (m11 - m22), m12)
    lam_lo = det / lam_hi
    theta = 0.5 * math.atan2(2.0 * m12, m11 - m22)

    def f(t):
        c, s = np.cos(t), np.sin(t)
        dg = (c * c, 2.0 * c * s, s * s)
        g = lam_hi * np.cos(t - theta) ** 2 + lam_lo * np.sin(t - theta) ** 2
        out = [np.sqrt(g / (1.0 + g))]
        if order >= 1:
            w = 0.5 / (np.sqrt(g) * (1.0 + g) ** 1.5)
            out += [w * d for d in dg]
        if order >= 2:
            jk = 0.25 * hessian_kernel(g)
            out += [jk * dg[i] * dg[j] for i in range(3) for j in range(i, 3)]
        return np.stack(out)

    # integrand has period pi
    val, _ = gauss_kronrod(f, 0.0, math.pi, epsabs=epsabs / 2.0, epsrel=epsrel, initial=2)
    val = 2.0 * val
    area = float(TWO_PI - val[0])
    if order == 0:
        return area
    grad = -val[1:4]
    if order == 1:
        return area, grad
    h = np.empty((3, 3))
    k = 4
    for i in range(3):
        for j in range(i, 3):
            h[i, j] = h[j, i] = val[k]
            k += 1
    return area, grad, h


@dataclass(frozen=True)
class EllipticPair:
    """Complete elliptic integrals ``K`` and ``E`` at modulus ``f``.

    ``E_minus_K`` is computed without cancellation.
    """

    K: float
    E: float
    modulus: float
    E_minus_K: float


def _agm_KE(k):
    k = np.asarray(k, dtype=float)
    a = np.ones_like(k)
    b = np.sqrt((1.0 - k) * (1.0 + k))
    c = k.copy()
    total = 0.5 * c * c
    power = 0.5
    for _ in range(40):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        power *= 2.0
        total = total + power * c * c
        if np.all(np.abs(c) <= 1e-17 * a):
            break
    K = HALF_PI / a
    return K, -K * total


def elliptic_KE(z):
    """Complete elliptic integrals of the first and second kind at modulus z.

    ``K(z) = int_0^1 dt / (sqrt(1-t^2) sqrt(1-z^2 t^2))`` and
    ``E(z) = int_0^1 sqrt(1-z^2 t^2) / sqrt(1-t^2) dt``.  Accepts scalars or
    arrays; scalars return an EllipticPair, arrays a tuple ``(K, E, E-K)``.
    """
    arr = np.asarray(z, dtype=float)
    if np.any(~(arr >= 0)) or np.any(arr >= 1):
        raise DomainError("modulus must lie in [0, 1)")
    K, dEK = _agm_KE(arr)
    small = arr < 1e-8
    if np.any(small):
        f2 = arr * arr
        K = np.where(small, HALF_PI * (1.0 + 0.25 * f2), K)
        dEK = np.where(small, -0.25 * math.pi * f2, dEK)
    E = K + dEK
    if arr.ndim == 0:
        return EllipticPair(float(K), float(E), float(arr), float(dEK))
    return K, E, dEK


def modulus_f(nu1, nu2):
    """``sqrt((nu1 - nu2) / (nu1 (1 + nu2)))``; zero exactly for circles."""
    nu1 = np.asarray(nu1, dtype=float)
    nu2 = np.asarray(nu2, dtype=float)
    if np.any(~(nu2 > 0)) or np.any(nu1 < nu2):
        raise DomainError("need nu1 >= nu2 > 0")
    f = np.sqrt((nu1 - nu2) / (nu1 * (1.0 + nu2)))
    return float(f) if f.ndim == 0 else f
