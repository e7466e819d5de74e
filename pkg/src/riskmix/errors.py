"""Exception types raised by riskmix.

Every error derives from :class:`RiskMixError`, which is a ``ValueError`` so
callers that only care about bad input can catch the builtin.
"""


class RiskMixError(ValueError):
    """Base class for all riskmix input and domain errors."""


class EmptyInput(RiskMixError):
    pass


class NegativeMass(RiskMixError):
    pass


class MassSumOutOfTolerance(RiskMixError):
    pass


class LevelOutOfDomain(RiskMixError):
    pass


class LengthMismatch(RiskMixError):
    pass


class IndexOutOfRange(RiskMixError, IndexError):
    pass


class SizeCapExceeded(RiskMixError):
    pass


class ParseError(RiskMixError):
    pass
