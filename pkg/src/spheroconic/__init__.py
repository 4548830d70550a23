"""Sphero-conics: areas, in-between conics and minimal enclosing conics on the elliptic plane."""

__version__ = "0.1.0"

from .area import area_from_axes, area_from_eigenvalues, area_normalized, elliptic_KE
from .duality import (
    GreatLine, contains_line, dual_conic, measure_of_conic, polar_of_line, polar_of_point,
    solve_line_set,
)
from .errors import (
    CenterOutsideHull, DegenerateInput, DegenerateSpectrum, DomainError, Infeasible,
    InternalInconsistency, NoConvergence, NonUnitQuaternion, NotAConic, ParseError,
    PreconditionViolated, QuadratureFailure, SpheroConicError, Unbounded,
)
from .geometry import (
    Conic, PointClass, SpherePoint, SymMat3, classify_point, eigen_sym3, normalize_conic,
    semi_axes,
)
from .inbetween import blend, sweep
from .solver import (
    Mode, PointSet, SolveResult, SolverConfig, min_enclosing_circle, solve_fixed_axes,
    solve_fixed_center, solve_general,
)
from .uniqueness import J_of_v, Verdict, certify, find_v0, inscribed_circle_radius, radius_R
from .variation import (
    abc_coefficients, bernstein_coefficients, rate_coaxial, rate_elliptic, rate_halfturn,
    rate_integral, variation_report,
)
from .verification import verify_lemmas

__all__ = [
    "__version__",
    "area_from_axes", "area_from_eigenvalues", "area_normalized", "elliptic_KE",
    "GreatLine", "contains_line", "dual_conic", "measure_of_conic", "polar_of_line",
    "polar_of_point", "solve_line_set",
    "CenterOutsideHull", "DegenerateInput", "DegenerateSpectrum", "DomainError", "Infeasible",
    "InternalInconsistency", "NoConvergence", "NonUnitQuaternion", "NotAConic", "ParseError",
    "PreconditionViolated", "QuadratureFailure", "SpheroConicError", "Unbounded",
    "Conic", "PointClass", "SpherePoint", "SymMat3", "classify_point", "eigen_sym3",
    "normalize_conic", "semi_axes",
    "blend", "sweep",
    "Mode", "PointSet", "SolveResult", "SolverConfig", "min_enclosing_circle",
    "solve_fixed_axes", "solve_fixed_center", "solve_general",
    "J_of_v", "Verdict", "certify", "find_v0", "inscribed_circle_radius", "radius_R",
    "abc_coefficients", "bernstein_coefficients", "rate_coaxial", "rate_elliptic",
    "rate_halfturn", "rate_integral", "variation_report",
    "verify_lemmas",
]
