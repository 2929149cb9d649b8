"""Exception hierarchy shared by all modules."""


class OrbitError(Exception):
    """Base class for all package errors."""


class DomainError(OrbitError, ValueError):
    """A value lies outside the mathematical domain of an operation
    (e.g. the valuation of zero)."""


class InputError(OrbitError, ValueError):
    """A structurally invalid argument (composite where a prime is
    required, malformed point, parameter out of range)."""


class DegenerateInputError(InputError):
    """Inputs that collapse the problem (alpha**n == beta, a pole hit)."""


class UnsupportedInputError(InputError):
    """Input outside the supported scope (e.g. irrational alpha where
    only rational base points are handled)."""


class ResourceError(OrbitError, RuntimeError):
    """A configured desk-scale ceiling was exceeded."""


class CertificationError(OrbitError, RuntimeError):
    """An internal numeric certificate could not be established even
    after the mandatory precision retries."""
