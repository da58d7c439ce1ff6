"""Exact-boundary random walk sampler for hitting times of Bessel processes.

The walk handles any real dimension ``delta >= 1`` by running two
image-method clocks per step, one for ``floor(delta)`` and one for the
fractional remainder.  Analytic and discretization oracles, statistical
tests and an experiment harness are included for validation.
"""

__version__ = "0.1.0"

from ._accel import backend
from .boundary import Boundary, make_boundary, psi, sample_position_given_survival, sample_tau_psi, tau_psi_density
from .errors import (
    BesselHitError,
    ConfigError,
    ConvergenceError,
    DomainError,
    NumericError,
    RejectionCapError,
    TruncationError,
)
from .rng import RngStream
from .walk import BesselDim, PassageSample, WalkConfig, integer_dimension_run, run, run_many, sample_path

__all__ = [
    "__version__",
    "backend",
    "Boundary",
    "make_boundary",
    "psi",
    "tau_psi_density",
    "sample_tau_psi",
    "sample_position_given_survival",
    "BesselHitError",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "NumericError",
    "RejectionCapError",
    "TruncationError",
    "RngStream",
    "BesselDim",
    "WalkConfig",
    "PassageSample",
    "run",
    "run_many",
    "integer_dimension_run",
    "sample_path",
]
