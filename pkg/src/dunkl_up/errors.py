"""Exception and warning types shared across the package."""


class DunklError(Exception):
    """Base class for all package errors."""


class DomainError(DunklError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(DunklError, ValueError):
    """Invalid scheme, scenario or tolerance configuration."""


class ContractError(DunklError, ValueError):
    """A precondition of an operation was violated by the caller."""


class AccuracyError(DunklError, ArithmeticError):
    """A computation could not reach its accuracy target.

    ``last_term`` carries the magnitude of the last series term (or the
    offending residual) when available.
    """

    def __init__(self, message, last_term=None):
        super().__init__(message)
        self.last_term = last_term


class NumericError(DunklError, ArithmeticError):
    """A NaN or infinite value appeared where finite data is required."""


class ConsistencyError(DunklError, ArithmeticError):
    """Two independent evaluations of the same quantity disagree."""


class RangeError(DunklError, OverflowError):
    """An intermediate quantity is not representable in double precision."""


class TailWarning(UserWarning):
    """Function does not decay sufficiently inside the truncation radius."""


class ChirpResolutionWarning(UserWarning):
    """Fractional angle close to a multiple of pi; chirp is under-resolved."""


def check_mu(mu):
    """Return ``mu`` as float, raising :class:`DomainError` if ``mu < -1/2``."""
    mu = float(mu)
    if not mu >= -0.5:
        raise DomainError(f"mu must satisfy mu >= -1/2, got {mu!r}")
    return mu
