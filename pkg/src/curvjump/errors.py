"""Exception hierarchy."""


class CurvjumpError(Exception):
    """Base class for all package errors."""


class DomainError(CurvjumpError, ValueError):
    """Argument outside the domain where an operation is defined."""


class OverflowGuardError(DomainError):
    """|z| beyond the evaluation cap, or a value that does not fit a double."""


class SectorError(DomainError):
    """Asymptotic branch requested outside its sector of validity."""


class ValidityError(DomainError):
    """Point violates the boundary-layer validity restrictions."""


class RegionError(DomainError):
    """Point does not belong to the zone an asymptotic formula is built for."""


class ConvergenceError(CurvjumpError, RuntimeError):
    """An iterative procedure failed to meet its residual bound."""


class QuadratureError(CurvjumpError, RuntimeError):
    """Contour quadrature failed."""


class ToleranceNotMet(QuadratureError):
    """Adaptive quadrature exhausted its subdivision budget.

    ``partial`` carries the best available result.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class PoleProximityError(QuadratureError):
    """Integration contour passes too close to a zero of w1'."""
