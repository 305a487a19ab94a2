"""Exception types raised across the package."""


class ZeroModeError(Exception):
    """Base class for all errors raised by :mod:`zeromodes`."""


class InvalidDimensionError(ZeroModeError, ValueError):
    pass


class UnsupportedError(ZeroModeError):
    """The requested construction does not exist for these inputs (e.g. even d)."""


class ValidationError(ZeroModeError, ValueError):
    pass


class DegenerateRepresentationError(ZeroModeError):
    pass


class NoIntertwinerError(ZeroModeError):
    """Two Clifford representations are not unitarily equivalent."""


class DomainError(ZeroModeError, ValueError):
    """Evaluation requested on a set where the field is singular."""


class DivergenceError(ZeroModeError):
    pass


class AccuracyError(ZeroModeError):
    """Quadrature did not reach the requested tolerance.

    ``estimate`` and ``error`` carry the best value obtained.
    """

    def __init__(self, msg, estimate=None, error=None):
        super().__init__(msg)
        self.estimate = estimate
        self.error = error


class ConvergenceError(ZeroModeError):
    """Iterative solver stopped before meeting its tolerance.

    ``result`` holds the last iterate so callers can inspect it.
    """

    def __init__(self, msg, result=None):
        super().__init__(msg)
        self.result = result
