"""Prabhakar and Hilfer-Prabhakar fractional calculus numerics."""

from prabhakar.errors import (
    DomainError,
    EnvelopeError,
    IndeterminateLimitError,
    PrabhakarError,
    PrecisionWarning,
    SeriesDivergenceError,
    SeriesTruncationError,
)
from prabhakar.functions import CallableFunction, SampledFunction
from prabhakar.kernels import PrabhakarParams, kernel_eval, sumudu_symbol
from prabhakar.mlfn import MLParams, SeriesControl, log_gamma_ratio, mittag_leffler, ml3
from prabhakar.operators import (
    BaseParams,
    HilferOrder,
    hp_derivative,
    hp_derivative_regularized,
    initial_weighted_limit,
    prabhakar_integral,
)
from prabhakar.quadrature import QuadratureConfig
from prabhakar.solvers import (
    DiffusionProblem,
    OdeProblem,
    PgfProblem,
    solve_diffusion_hp,
    solve_diffusion_reg,
    solve_ode,
    solve_pgf,
)
from prabhakar.transforms import (
    FrequencyGrid,
    fourier_forward,
    fourier_inverse,
    sumudu_hp_symbol,
    sumudu_hpreg_symbol,
    sumudu_numeric,
    verify_convolution,
)
from prabhakar.verify import VerificationReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "BaseParams", "CallableFunction", "DiffusionProblem", "DomainError", "EnvelopeError",
    "FrequencyGrid", "HilferOrder", "IndeterminateLimitError", "MLParams", "OdeProblem",
    "PgfProblem", "PrabhakarError", "PrabhakarParams", "PrecisionWarning", "QuadratureConfig",
    "SampledFunction", "SeriesControl", "SeriesDivergenceError", "SeriesTruncationError",
    "VerificationReport", "fourier_forward", "fourier_inverse", "hp_derivative",
    "hp_derivative_regularized", "initial_weighted_limit", "kernel_eval", "log_gamma_ratio",
    "mittag_leffler", "ml3", "prabhakar_integral", "run_suite", "solve_diffusion_hp",
    "solve_diffusion_reg", "solve_ode", "solve_pgf", "sumudu_hp_symbol", "sumudu_hpreg_symbol",
    "sumudu_numeric", "sumudu_symbol", "verify_convolution",
]
