class TwoFacedError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(TwoFacedError, ValueError):
    """A parameter is outside its valid range (l, w, p, pi, n, ...)."""


class BitFormatError(TwoFacedError, ValueError):
    """Bit text or a received word contains an invalid symbol."""


class ConfigurationError(TwoFacedError, ValueError):
    """A parameter combination admits no valid decoder (e.g. no BSC threshold)."""
