"""Exception hierarchy.

Errors derived from :class:`NumericalGuardError` signal that a numerical
safeguard refused to produce a silently degraded answer; the command-line
front end maps them to exit code 3.
"""


class SurfspecError(Exception):
    """Base class for all package errors."""


class ValidationError(SurfspecError, ValueError):
    """An argument is outside the supported range."""


class BadParams(ValidationError):
    pass


class ZeroField(ValidationError):
    pass


class NumericalGuardError(SurfspecError):
    """A numerical guard tripped."""


class BisectionStall(NumericalGuardError):
    pass


class SingularShift(NumericalGuardError):
    """A pivot of the shifted factorization fell below the pivot floor."""


class TruncationTooSmall(NumericalGuardError):
    pass


class ProblemTooLarge(NumericalGuardError):
    pass


class LambdaTooLarge(NumericalGuardError):
    pass


class MarginTooSmall(NumericalGuardError):
    pass
