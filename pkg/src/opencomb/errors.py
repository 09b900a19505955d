"""Exception hierarchy shared by every module."""


class OpenCombError(Exception):
    """Base class for all package errors."""


class InvalidGraphError(OpenCombError, ValueError):
    """A permutation pair or labeling does not describe an admissible graph."""


class NodalValidationError(InvalidGraphError):
    """A nodal graph violates one of its invariants.

    ``code`` is one of ``duplicate-node``, ``ghost-slot``, ``even-boundary``,
    ``disconnected``, ``negative-genus``, ``labels``, ``structure``.
    """

    def __init__(self, code: str, message: str):
        super().__init__(f"[{code}] {message}")
        self.code = code


class ResourceLimitError(OpenCombError, RuntimeError):
    """A search exceeded its configured cap."""

    def __init__(self, what: str, bound: int):
        super().__init__(f"{what} exceeded the configured cap of {bound}")
        self.what = what
        self.bound = bound


class OutOfScopeError(OpenCombError, ValueError):
    """The signature violates 2g-2+k+2l > 0 or 2 | g+k-1."""


class NonLaurentError(OpenCombError, ArithmeticError):
    """A total amplitude kept a (lambda_i + lambda_j) denominator after reduction."""


class VerificationError(OpenCombError, AssertionError):
    """An internal consistency check failed."""
