"""Exception hierarchy shared by every module of the package."""


class DyadicError(ValueError):
    """Base class for all parameter and resolution errors."""


class InvalidResolution(DyadicError):
    pass


class ResolutionMismatch(DyadicError):
    pass


class ResolutionTooCoarse(DyadicError):
    """An interval rank, level or kernel order needs more coordinates than available."""


class FrequencyAboveResolution(DyadicError):
    pass


class OutOfRange(DyadicError):
    pass


class InvalidCount(DyadicError):
    pass


class PoleError(DyadicError):
    """Cesaro numbers are undefined for alpha = -1, -2, ..."""


class InvalidExponent(DyadicError):
    pass
