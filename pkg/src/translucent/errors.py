"""Exception types shared across the package."""


class TranslucentError(Exception):
    """Base class for all package errors."""


class ParamDomainError(TranslucentError, ValueError):
    """A game or model parameter lies outside its admissible domain."""


class ProfileShapeError(TranslucentError, ValueError):
    """A strategy profile has the wrong length or an out-of-range entry."""


class StrategyRangeError(TranslucentError, ValueError):
    """A single strategy is not in the player's strategy set."""


class CapExceededError(TranslucentError):
    """An exhaustive check was requested on an instance above its cap."""


class OracleCapExceededError(CapExceededError):
    """The subset-enumeration oracle was asked for more players than it supports."""
