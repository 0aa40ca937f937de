"""MSE-optimal QAM-like spacings for over-the-air sum computation under Cauchy noise."""

__version__ = "0.1.0"

from .grid import (  # noqa: E402
    ConstellationParams,
    DomainError,
    GridPoint,
    average_power,
    decode,
    encode,
    estimate_sum,
    superimpose,
)
from .noise import NoiseModel, density, sample  # noqa: E402
from .analysis import MseCoefficients, closed_form_mse, exact_axis_mse, mse_coefficients, mu  # noqa: E402
from .optimizer import (  # noqa: E402
    OptimizationResult,
    PowerBudget,
    exact_scan,
    g_function,
    g_monotonicity_check,
    kkt_residual,
    solve_t_star,
)
from .simulator import McConfig, McResult, SweepRecord, run_monte_carlo, run_trial, sweep_snr  # noqa: E402
