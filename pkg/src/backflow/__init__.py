"""Lowest eigenvalue of the spatially averaged probability current for a
right-moving particle scattering off point defects (free, delta, jump),
plus executable checks of the defect conservation laws."""

__version__ = "0.1.0"

from .core import (
    ConfigurationError,
    DefectKind,
    DefectSpec,
    GaussianTest,
    GridSpec,
    HermitianKernelMatrix,
    NumericalError,
    Side,
    SpectralResult,
    make_grid,
)
from .kernels import KernelPointRequest, kernel
from .quadrature import HalfLineIntegralRequest, QuadratureError, gaussian_eval, halfline_fourier
from .scattering import bound_states, check_sewing, coefficients, scattering_state
from .spectral import AssemblyError, SpectralError, build_matrix, hermiticity_report, lowest_eigenpair
from .conservation import (
    ModeSuperposition,
    Quantity,
    RatePair,
    boundary_rates,
    delta_momentum_residual,
    fixing_term_consistency,
)
from .scan import PRESETS, SweepPlan, SweepRow, convergence_study, run_sweep

__all__ = [
    "ConfigurationError",
    "DefectKind",
    "DefectSpec",
    "GaussianTest",
    "GridSpec",
    "HermitianKernelMatrix",
    "NumericalError",
    "Side",
    "SpectralResult",
    "make_grid",
    "KernelPointRequest",
    "kernel",
    "HalfLineIntegralRequest",
    "QuadratureError",
    "gaussian_eval",
    "halfline_fourier",
    "bound_states",
    "check_sewing",
    "coefficients",
    "scattering_state",
    "AssemblyError",
    "SpectralError",
    "build_matrix",
    "hermiticity_report",
    "lowest_eigenpair",
    "ModeSuperposition",
    "Quantity",
    "RatePair",
    "boundary_rates",
    "delta_momentum_residual",
    "fixing_term_consistency",
    "PRESETS",
    "SweepPlan",
    "SweepRow",
    "convergence_study",
    "run_sweep",
    "__version__",
]
