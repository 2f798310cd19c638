"""Exception hierarchy shared by every lieflag module."""


class LieFlagError(ValueError):
    """Base class for all errors raised by lieflag."""


class InvalidInputError(LieFlagError):
    """Input violates a structural requirement (non-PD metric, out-of-domain parameter, ...)."""


class DegenerateInputError(LieFlagError):
    """Vectors that must be independent are (numerically) dependent."""


class DomainError(LieFlagError):
    """A Finsler norm was evaluated outside its domain of definition."""
