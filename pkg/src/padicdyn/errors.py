"""Exception types and resource caps shared by all modules.

Every cap is a keyword argument on the operation that enforces it; the
values here are only the defaults.  Exceeding a cap raises a clean error
naming the cap instead of silently truncating.
"""

DEFAULT_DEGREE_CAP = 2 ** 16
DEFAULT_ORBIT_CAP = 2 ** 16
DEFAULT_COEFF_BIT_CAP = 2 ** 26
DEFAULT_MANTISSA_BITS = 128


class PadicDynError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(PadicDynError, ValueError):
    """An argument violates a documented precondition (bad prime, bad range)."""


class ResourceLimitError(PadicDynError):
    """A configurable degree / orbit-size / coefficient-size cap was exceeded."""


class PrecisionViolationError(PadicDynError):
    """An operation would produce fewer trusted digits than required."""


class NumericalFailureError(PadicDynError):
    """A floating-point computation failed to converge or to certify."""


class InternalError(PadicDynError):
    """A condition that the underlying mathematics rules out was observed."""
