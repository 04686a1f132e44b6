"""Exception hierarchy shared by all cfcc modules."""


class CfccError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(CfccError, ValueError):
    """An input violates the documented precondition of an operation."""


class DenseCapError(PreconditionError):
    """A dense O(n^2)-memory path was asked to handle a too-large matrix."""

    def __init__(self, dim, cap):
        super().__init__(
            f"dense path refused: dimension {dim} exceeds dense cap {cap}; "
            "use the sketch-based path (approx) instead"
        )
        self.dim = dim
        self.cap = cap


class EnumerationCapError(PreconditionError):
    """Brute-force enumeration would visit more subsets than allowed."""


class EdgeListError(CfccError, ValueError):
    """Malformed or unreadable edge-list input; ``lineno`` is 1-based or None."""

    def __init__(self, lineno, message):
        super().__init__(message if lineno is None else f"line {lineno}: {message}")
        self.lineno = lineno


class SolverError(CfccError, ArithmeticError):
    """An iterative solve did not reach its tolerance within the iteration cap."""

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(f"{message} (relative residual {residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


class NumericalDegeneracyError(CfccError, ArithmeticError):
    """A quantity that is positive in exact arithmetic came out non-positive."""
