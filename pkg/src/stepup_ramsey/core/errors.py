"""Exceptions raised by stepup_ramsey.

Input problems also derive from ValueError and run-time outcomes from
RuntimeError so callers can catch them with the builtin types.
"""


class StepupError(Exception):
    """Base class for all stepup_ramsey errors."""


class DistinctnessError(StepupError, ValueError):
    """Two vertices that must differ are equal."""


class OrderError(StepupError, ValueError):
    """Input is not strictly increasing or indices are out of order."""


class PatternError(StepupError, ValueError):
    """A delta pattern has equal adjacent entries or the wrong shape."""


class PreconditionError(StepupError, ValueError):
    """Input violates a documented precondition."""


class RealizabilityError(StepupError, ValueError):
    """No increasing vertex list realizes the requested pattern."""


class SizeError(StepupError, ValueError):
    """A size parameter is too small (or too large) for the operation."""


class BaseRangeError(StepupError, ValueError):
    """A delta value falls outside the ground set of the base coloring."""


class CertificateError(StepupError, ValueError):
    """A certificate references data that is not present."""


class FormatError(StepupError, ValueError):
    """A coloring or certificate file is malformed."""


class ResourceError(StepupError, RuntimeError):
    """An enumeration would exceed its configured budget."""


class SearchExhausted(StepupError, RuntimeError):
    """Rejection sampling ran out of attempts.

    This is inconclusive: it never shows that no good coloring exists.
    """

    def __init__(self, message, log=None):
        super().__init__(message)
        self.log = log


class PipelineError(StepupError, RuntimeError):
    """Internal contradiction in the blue-clique pipeline."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state or {}


class ClaimViolation(StepupError):
    """A verified claim failed; ``report`` holds the replayable witness."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class CrossCheckError(StepupError):
    """Symbolic and integer-level evaluations disagree."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}
