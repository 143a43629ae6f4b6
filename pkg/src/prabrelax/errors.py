"""Exception hierarchy shared by every module of the package."""


class PrabhakarError(Exception):
    """Base class for all errors raised by :mod:`prabrelax`."""


class InvalidParam(PrabhakarError, ValueError):
    """A parameter lies outside the domain of the requested operation."""


class NonConvergent(PrabhakarError, ArithmeticError):
    """A series did not reach its stopping rule or lost too many digits."""


class DenominatorTooLarge(InvalidParam):
    """The rational approximation of alpha needs a denominator above the cap."""


# alias kept for callers that think of the cap rather than the denominator
RationalCap = DenominatorTooLarge


class MethodDisagreement(PrabhakarError, ArithmeticError):
    """Two independent numerical methods differ by more than the gate."""


class NumericalOverflow(PrabhakarError, OverflowError):
    """An intermediate quantity left the double-precision range."""


class QuadratureFailure(PrabhakarError, ArithmeticError):
    """Adaptive quadrature did not reach the requested accuracy."""


class RouteUnavailable(PrabhakarError):
    """The requested evaluation route does not apply to these parameters."""


class GridTooCoarse(PrabhakarError, ArithmeticError):
    """Step halving did not converge before the refinement cap."""


class GridTooNarrow(InvalidParam):
    """A frequency grid does not cover the decades needed for a fit."""


__all__ = [
    "PrabhakarError",
    "InvalidParam",
    "NonConvergent",
    "DenominatorTooLarge",
    "RationalCap",
    "MethodDisagreement",
    "NumericalOverflow",
    "QuadratureFailure",
    "RouteUnavailable",
    "GridTooCoarse",
    "GridTooNarrow",
]
