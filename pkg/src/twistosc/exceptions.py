"""Exception types raised across the package."""


class TwistOscError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(TwistOscError, ValueError):
    pass


class QuantumNumberError(TwistOscError, ValueError):
    """Raised for occupations or (n, l) pairs outside the allowed set."""


class BasisMismatchError(TwistOscError, ValueError):
    pass


class NotNormalizedError(TwistOscError, ValueError):
    pass


class NotSelfAdjointError(TwistOscError, ValueError):
    pass


class TruncationError(TwistOscError, ValueError):
    """The Fock cutoff is too small for the requested state.

    ``required`` carries the smallest cutoff that would be accepted.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class ConvergenceError(TwistOscError, RuntimeError):
    """Finite-difference refinement did not behave as a converging scheme.

    ``trace`` holds the per-grid eigenvalues that triggered the failure.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


class ConfigError(TwistOscError, ValueError):
    pass
