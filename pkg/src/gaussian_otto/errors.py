"""Exception types raised by the simulator."""


class GaussianOttoError(Exception):
    """Base class for all simulator errors."""


class InvalidArgument(GaussianOttoError, ValueError):
    pass


class InvalidHamiltonian(InvalidArgument):
    """Hamiltonian matrix is not symmetric positive definite."""


class InvalidState(GaussianOttoError, ValueError):
    """Covariance matrix violates the uncertainty principle or symmetry."""


class NumericalDegeneracy(GaussianOttoError, ArithmeticError):
    """Spectrum of i*Omega*sigma did not come in +/- pairs."""


class IntegrationAccuracyError(GaussianOttoError, ArithmeticError):
    """Propagator drifted off the symplectic group; reduce the step size."""

    def __init__(self, defect: float, tol: float, t: float):
        self.defect = defect
        self.tol = tol
        self.t = t
        super().__init__(
            f"symplecticity defect {defect:.3e} exceeds tolerance {tol:.1e} at t={t:g}"
        )
