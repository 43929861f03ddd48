"""Gaussian (covariance-matrix) simulation of a harmonic Otto engine coupled to finite ring baths."""

from .dynamics import IntegratorControls, SwitchingProfile
from .engine import CycleRecord, EngineConfig, OttoEngine, run_engine
from .errors import (
    GaussianOttoError,
    IntegrationAccuracyError,
    InvalidArgument,
    InvalidHamiltonian,
    InvalidState,
    NumericalDegeneracy,
)
from .models import BathSpec, CouplingSpec, WorkingMediumSpec

__all__ = [
    "BathSpec",
    "CouplingSpec",
    "CycleRecord",
    "EngineConfig",
    "GaussianOttoError",
    "IntegrationAccuracyError",
    "IntegratorControls",
    "InvalidArgument",
    "InvalidHamiltonian",
    "InvalidState",
    "NumericalDegeneracy",
    "OttoEngine",
    "SwitchingProfile",
    "WorkingMediumSpec",
    "run_engine",
]
