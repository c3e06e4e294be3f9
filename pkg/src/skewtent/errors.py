"""Exception hierarchy.

Each class carries a short ``category`` string; the command line prints it as
the machine-parseable first field of its single error line.
"""


class SkewTentError(Exception):
    category = "error"


class RegionError(SkewTentError, ValueError):
    """Parameters outside the region 0.5 < beta <= 1, 1 - beta < alpha < beta."""

    category = "region"


class DomainError(SkewTentError, ValueError):
    category = "domain"


class MalformedSequenceError(SkewTentError, ValueError):
    category = "malformed"


class ThetaTruncationError(SkewTentError):
    """Truncated block data cannot certify the requested tolerance."""

    category = "truncation"

    def __init__(self, message, achievable):
        super().__init__(message)
        self.achievable = achievable


class DegenerateGradientError(SkewTentError, ZeroDivisionError):
    category = "degenerate"


class NotBracketedError(SkewTentError):
    category = "not-bracketed"


class EmptyTraceError(SkewTentError):
    category = "empty-trace"


class MarkovViolationError(SkewTentError):
    category = "markov-violation"


class NonUniqueDensityError(SkewTentError):
    category = "non-unique"


class NegativeDensityError(SkewTentError):
    category = "negative-density"
