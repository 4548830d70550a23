"""Absolute polarity between points and lines, dual conics and line sets.

A great circle is represented by its pole.  A conic contains a line when
the line meets it in at most one real point; this happens exactly when the
pole of the line lies in the closed interior of the dual conic, whose
matrix is the inverse of the conic matrix.  Minimising the measure of an
enclosing conic of a line set is therefore the point problem for the
poles, followed by dualisation.
"""

from dataclasses import dataclass, replace

import numpy as np

from .area import area_from_axes
from .errors import InternalInconsistency
from .geometry import SpherePoint, frame_from_center, normalize_conic, semi_axes
from .solver import (
    Mode, PointSet, SolverConfig, solve_fixed_axes, solve_fixed_center, solve_general,
)
from .variation import adjugate3


@dataclass(frozen=True)
class GreatLine:
    """Great circle orthogonal to its (canonical) pole."""

    pole: SpherePoint

    @classmethod
    def from_vector(cls, v):
        return cls(SpherePoint.from_vector(v))

    def contains_point(self, p, tol=1e-12):
        v = p.vector if isinstance(p, SpherePoint) else np.asarray(p, dtype=float)
        return abs(float(self.pole.vector @ v)) <= tol


def polar_of_point(p):
    """The line whose pole is ``p``."""
    return GreatLine(p if isinstance(p, SpherePoint) else SpherePoint.from_vector(p))


def polar_of_line(line):
    """The pole of ``line``."""
    return line.pole


def dual_conic(c):
    """Conic of the poles of the tangent lines of ``c``.

    Computed as the normalisation of ``-adj(M)``, a positive multiple of
    ``M^-1``.  Semi-axis tangents map as ``(a, b) -> (1/b, 1/a)``.
    """
    return normalize_conic(-adjugate3(c.matrix))


def _restricted_value(c, pole):
    # det of M restricted to the plane of the line, divided by -det M;
    # equals pole^T M^-1 pole for the normalised matrix
    r = frame_from_center(pole)
    u, v = r[:, 0], r[:, 1]
    m = c.matrix
    b = np.array([[u @ m @ u, u @ m @ v], [v @ m @ u, v @ m @ v]])
    return -float(np.linalg.det(b)) / (c.nu1 * c.nu2)


def contains_line(c, line, tol=1e-9):
    """True if ``line`` meets ``c`` in at most one real point.

    Two routes are evaluated: the sign of the conic restricted to the
    line's plane, and the position of the pole relative to the dual conic.

    Raises
    ------
    InternalInconsistency
        If the routes disagree by more than ``tol``.
    """
    pole = line.pole.vector
    direct = _restricted_value(c, pole)
    dual = dual_conic(c).value(pole)
    if (direct <= tol) != (dual <= tol) and abs(direct - dual) > tol:
        raise InternalInconsistency(
            f"line containment routes disagree: restricted {direct:.3g}, dual {dual:.3g}")
    return bool(dual <= tol)


def measure_of_conic(c, tol=1e-10):
    """Measure of the set of lines contained in ``c`` (area of the dual)."""
    a, b, _, _ = semi_axes(c)
    return area_from_axes(1.0 / b, 1.0 / a, tol).area


def _poles(lines):
    return PointSet([ln.pole if isinstance(ln, GreatLine) else SpherePoint.from_vector(ln)
                     for ln in lines])


def solve_line_set(lines, mode=Mode.GENERAL, frame=None, center=None, config=None):
    """Enclosing conic of minimal measure for a set of lines.

    The poles are solved as a point set in the requested mode and the
    resulting conic is dualised.  ``area`` of the returned result is the
    measure, and ``objective`` is ``"measure"``.  For the fixed-axes and
    fixed-center modes the frame or center applies to both conics, since
    a conic and its dual share axes and center.
    """
    mode = Mode(mode)
    cfg = config or SolverConfig()
    ps = _poles(lines)
    if mode == Mode.FIXED_AXES:
        res = solve_fixed_axes(ps, frame, cfg)
    elif mode == Mode.FIXED_CENTER:
        res = solve_fixed_center(ps, center, cfg)
    else:
        res = solve_general(ps, cfg)
    return replace(res, conic=dual_conic(res.conic), objective="measure")


__all__ = [
    "GreatLine", "polar_of_point", "polar_of_line", "dual_conic", "contains_line",
    "measure_of_conic", "solve_line_set",
]
