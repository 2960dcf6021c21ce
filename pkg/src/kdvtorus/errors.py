"""Exception types shared across the toolkit."""

__all__ = [
    "KdvTorusError",
    "GridError",
    "CorruptFieldError",
    "InstabilityError",
    "TruncationError",
    "UndefinedRatioError",
    "DomainError",
    "ConfigError",
]


class KdvTorusError(Exception):
    """Base class for all toolkit errors."""


class GridError(KdvTorusError, ValueError):
    """Sample grid is invalid (wrong length, not a power of two, too small)."""


class CorruptFieldError(KdvTorusError, ValueError):
    """A field violates the reality invariant beyond tolerance."""


class InstabilityError(KdvTorusError, RuntimeError):
    """Time integration blew up (norm exceeded the abort threshold)."""


class TruncationError(KdvTorusError, ValueError):
    """Operator input has support too wide for its storage range."""


class UndefinedRatioError(KdvTorusError, ValueError):
    """A ratio diagnostic was requested for a field where it is undefined."""


class DomainError(KdvTorusError, ValueError):
    """A physical parameter lies outside its admissible range."""


class ConfigError(KdvTorusError, ValueError):
    """A configuration file or option is malformed."""
