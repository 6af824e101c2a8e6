"""Exception types raised across the package."""


class SlicePressureError(Exception):
    """Base class for every error raised by this package."""


class NotCoprime(SlicePressureError, ValueError):
    pass


class OutOfRange(SlicePressureError, ValueError):
    pass


class LengthMismatch(SlicePressureError, ValueError):
    pass


class CapExceeded(SlicePressureError, ValueError):
    """A requested length exceeds the configured enumeration cap."""


class NotIrreducible(SlicePressureError, ValueError):
    pass


class DegenerateDenominator(SlicePressureError, ZeroDivisionError):
    pass


class NotConverged(SlicePressureError, RuntimeError):
    pass


class ZeroImage(SlicePressureError, ValueError):
    pass


class HilbertUndefined(SlicePressureError, ValueError):
    """The two points do not share a domain on which the metric is finite."""


class EmptySample(SlicePressureError, ValueError):
    pass


class DegenerateEigenvector(SlicePressureError, ValueError):
    pass


class InvariantViolation(SlicePressureError, AssertionError):
    """A runtime-checked mathematical invariant failed."""


# errors that mean "bad input" rather than "computation went wrong"
USAGE_ERRORS = (NotCoprime, OutOfRange, LengthMismatch)
