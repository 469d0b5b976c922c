"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Malformed or inconsistent user input (groups, set specs, configs)."""


class UnsupportedSetError(ValueError):
    """The requested set/group combination has no supported method."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured size/iteration budget."""


class InsufficientSamplesError(RuntimeError):
    """A sampling run produced too few usable primes to decide anything."""


class AmbiguousDegreeError(RuntimeError):
    """Sampling cannot separate two candidate degrees at 3 sigma."""
