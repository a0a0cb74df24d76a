"""Exception hierarchy shared by every module of the package."""


class MeridianError(Exception):
    """Base class for all package errors."""


class ValidationError(MeridianError, ValueError):
    """Malformed configuration or out-of-contract arguments."""


class DomainError(MeridianError, ValueError):
    """Evaluation requested outside a function's domain."""


class AxisPoint(DomainError):
    """The point lies on the x0 axis (rho = 0), where the azimuth is undefined."""


class NonUnitAzimuth(ValidationError):
    pass


class DivisionByZero(MeridianError, ZeroDivisionError):
    pass


class UnsupportedOrder(DomainError):
    pass


class QuadrantViolation(DomainError):
    """Bihyperbolic potentials live in the open quadrant x1 > 0, x2 > 0."""


class Unsupported(MeridianError):
    """Operation not closed on the given expression (e.g. primitive of log)."""


class IntegrationFailure(MeridianError, RuntimeError):
    pass


class StepSizeUnderflow(IntegrationFailure):
    pass


class StagnationPoint(MeridianError, RuntimeError):
    pass


class NotAnEquilibrium(MeridianError, ValueError):
    pass
