"""Exception hierarchy. Every error raised by the package derives from PrandtlModesError."""


class PrandtlModesError(Exception):
    """Base class for package errors."""


class NonConvergent(PrandtlModesError):
    """A series or iterative scheme did not reach its tolerance."""


class PoleArgument(PrandtlModesError):
    """Gamma (or a derived function) evaluated at a pole."""


class SingularPoint(PrandtlModesError):
    """Evaluation too close to a removable or genuine singularity."""


class MaxDepthExceeded(PrandtlModesError):
    """Adaptive quadrature hit its bisection limit.

    The best available estimate and its error bound are kept on the exception.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class InvalidShear(PrandtlModesError):
    """Shear-flow parameters outside the admissible set."""


class InvalidMode(PrandtlModesError):
    """Fourier mode parameters outside the admissible set."""


class DegenerateSystem(PrandtlModesError):
    """The boundary system lost rank in an unexpected way."""


class SectorViolation(PrandtlModesError):
    """Asymptotic formula requested outside its sector of validity."""


class ExcludedParameter(PrandtlModesError):
    """Parameters for which an expansion is not defined."""


class UnsupportedMu(PrandtlModesError):
    """Spectral parameter for which a routine has no valid formula."""
