"""Exception types shared across the package."""


class CvlqrError(Exception):
    """Base class for all cvlqr errors."""


class SingularBimatrixError(CvlqrError):
    """Raised when a bimatrix (or inner matrix) is numerically singular."""


class StructureViolationError(CvlqrError):
    """Raised when a pair fails the Hermitian/complex-symmetric structure check."""


class NotPositiveDefiniteError(CvlqrError):
    """Raised when a matrix required to be positive definite is not."""


class InvalidWeightsError(CvlqrError):
    """Raised when cost weights are not Hermitian positive definite."""


class SolverError(CvlqrError):
    """Base class for fixed-point solver failures."""

    def __init__(self, message: str, iterations: int = 0):
        super().__init__(message)
        self.iterations = iterations


class NotConvergentError(SolverError):
    """Iteration budget exhausted before the step tolerance was met."""


class DivergedError(SolverError):
    """Iterates exceeded the divergence bound (non-stabilizable system)."""


class InputError(CvlqrError):
    """Raised when an input document fails to parse or validate."""
