"""Exception types shared across the package."""


class IonTomoError(Exception):
    """Base class for all package-specific errors."""


class IntegrationError(IonTomoError):
    """Adaptive integration failed (step underflow or non-finite state).

    Carries the time at which the failure occurred in ``.time``.
    """

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class CoverageError(IonTomoError):
    """A grid does not cover the support of the quantity evaluated on it."""


class DegenerateStateError(IonTomoError):
    """State parameters make a normalization constant blow up."""
