"""Radius bound for unique minimal enclosing conics and certificates.

``J(v)`` is strictly increasing on ``[0, 2]`` and changes sign once at
``v0 ~ 0.6859``.  Conics whose major semi-axis tangent ``a`` satisfies
``a^-2 > v0`` (that is ``alpha < R = arctan(v0^-1/2)``) fall into the
regime where the minimal enclosing conic is unique.  ``certify`` checks
the two sufficient conditions for a concrete candidate.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
import math

from .area import area_from_axes
from .errors import DomainError
from .geometry import semi_axes
from .quadrature import gauss_kronrod
from .sphere import inscribed_circle_radius

import numpy as np


def J_of_v(v, tol=1e-12):
    """Evaluate ``J(v)`` for ``0 <= v <= 2``.

    With ``w = sqrt((1 + v)/3)`` and ``t = sin u``::

        J(v) = int_0^{asin w} (1 + v - 3 sin^2 u) du
             + int_{asin w}^{pi/2} (1 + v - 3 sin^2 u) sqrt(1+v) / sqrt(1 + v - sin^2 u) du

    The substitution removes the ``1/sqrt(1 - t^2)`` endpoint singularity;
    a second substitution resolves the near-singular peak for small ``v``.
    At ``v = 0`` the second integrand behaves like ``-2/cos u`` and the
    integral diverges, so ``J(0) = -inf``.
    """
    v = float(v)
    if not 0.0 <= v <= 2.0:
        raise DomainError(f"v must lie in [0, 2], got {v}")
    if v == 0.0:
        return -math.inf
    u0 = math.asin(min(1.0, math.sqrt((1.0 + v) / 3.0)))
    sv = math.sqrt(1.0 + v)

    # first part in closed form: (1+v) u - 3 (u/2 - sin 2u / 4)
    j1 = (1.0 + v) * u0 - 1.5 * u0 + 0.75 * math.sin(2.0 * u0)
    if u0 >= 0.5 * math.pi:
        return j1

    # With u = pi/2 - x and sin x = sqrt(v) sinh s the second integrand
    # becomes smooth; its length grows like log(1/v) as v -> 0.
    top = math.asinh(math.sqrt((2.0 - v) / (3.0 * v)))

    def f(s):
        sh2 = v * np.sinh(s) ** 2
        return (v - 2.0 + 3.0 * sh2) * sv / np.sqrt(1.0 - sh2)

    j2, _ = gauss_kronrod(f, 0.0, top, epsabs=tol, initial=4)
    return j1 + float(j2)


@lru_cache(maxsize=16)
def find_v0(tol=1e-10, quad_tol=1e-13):
    """Unique zero of ``J`` on ``[0, 2]`` by bisection."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    lo, hi = 0.0, 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if J_of_v(mid, quad_tol) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def radius_R():
    """``R = arctan(v0^-1/2)`` in radians."""
    return math.atan(1.0 / math.sqrt(find_v0()))


class Verdict(str, Enum):
    UNIQUE = "Unique"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class UniquenessCertificate:
    """Outcome of the two sufficient conditions for uniqueness.

    ``area_bound`` is ``area_from_axes(tan R, tan rho)``, that is, with
    semi-axis tangents.  ``area_bound_radians`` evaluates the same function
    at the angles themselves and is informational only.
    """

    rho: float
    R: float
    v0: float
    area_bound: float
    candidate_area: float
    alpha: float
    beta: float
    condition1_met: bool
    condition2_met: bool
    major_axis_ok: bool
    verdict: Verdict
    rho_source: str = "user"
    area_bound_radians: float = float("nan")
    notes: tuple = field(default_factory=tuple)

    def as_dict(self):
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["verdict"] = self.verdict.value
        d["notes"] = list(self.notes)
        return d


def certify(candidate, rho, rho_source="user"):
    """Check a candidate enclosing conic against the uniqueness conditions.

    Parameters
    ----------
    candidate : Conic
        An enclosing conic of the point set.
    rho : float
        Radius (radians) of a circle contained in the convex hull.
    rho_source : str
        Where ``rho`` came from, recorded verbatim.

    Notes
    -----
    Condition 1 holds when ``rho > 0`` and the candidate's minor semi-axis
    is at least ``rho``.  Condition 2 holds when the candidate's area is
    below ``area_from_axes(tan R, tan rho)``.
    """
    if not 0.0 < rho < 0.5 * math.pi:
        raise DomainError(f"rho must lie in (0, pi/2), got {rho}")
    v0 = find_v0()
    R = radius_R()
    a, b, alpha, beta = semi_axes(candidate)
    cand = area_from_axes(a, b).area
    bound = area_from_axes(math.tan(R), math.tan(rho)).area
    bound_rad = area_from_axes(R, rho).area
    cond1 = bool(rho > 0.0 and beta >= rho - 1e-12)
    cond2 = bool(cand < bound)
    notes = ["area bound uses semi-axis tangents (tan R, tan rho)"]
    if rho > R:
        notes.append("rho exceeds R")
    verdict = Verdict.UNIQUE if cond1 and cond2 else Verdict.INCONCLUSIVE
    return UniquenessCertificate(
        rho=float(rho), R=R, v0=v0, area_bound=bound, candidate_area=cand,
        alpha=alpha, beta=beta, condition1_met=cond1, condition2_met=cond2,
        major_axis_ok=bool(candidate.nu2 > v0), verdict=verdict,
        rho_source=rho_source, area_bound_radians=bound_rad, notes=tuple(notes),
    )


__all__ = [
    "J_of_v", "find_v0", "radius_R", "Verdict", "UniquenessCertificate",
    "certify", "inscribed_circle_radius",
]
