"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain where a quantity is defined."""


class RangeError(DomainError):
    """A lookup fell outside the tabulated range (no extrapolation)."""


class DegenerateInputError(DomainError):
    """A normalization denominator vanished (e.g. both input amplitudes zero)."""


class TableFormatError(DomainError):
    """A dispersion table file is malformed."""
