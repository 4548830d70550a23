"""Exception hierarchy shared by all modules."""


class SpheroConicError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SpheroConicError, ValueError):
    """An argument lies outside the domain of a formula."""


class NonUnitQuaternion(DomainError):
    pass


class PreconditionViolated(DomainError):
    pass


class NotAConic(SpheroConicError, ValueError):
    """A matrix does not have signature (2, 1)."""


class DegenerateSpectrum(DomainError):
    """Eigenvalues too close for a formula that divides by their gap."""


class QuadratureFailure(SpheroConicError, RuntimeError):
    pass


class DegenerateInput(SpheroConicError, ValueError):
    pass


class Unbounded(DegenerateInput):
    """No open hemisphere contains the input."""


class Infeasible(SpheroConicError, ValueError):
    pass


class CenterOutsideHull(Infeasible):
    pass


class NoConvergence(SpheroConicError, RuntimeError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class InternalInconsistency(SpheroConicError, RuntimeError):
    """Two independent computations of the same quantity disagree."""


class ParseError(SpheroConicError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)
        self.line = line
        self.column = column
