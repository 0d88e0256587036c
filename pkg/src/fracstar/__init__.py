"""Fractional approximations u_delta(t^(1/delta)) of first-order evolution equations.

As delta -> 1+ the rescaled solutions of the order-delta Caputo-Djrbashian
problem converge to the solution of du/dt = Au and to its continuation on
the Mittag-Leffler star.
"""
__version__ = "0.1.0"

from .errors import (
    BoundViolation,
    BranchError,
    DomainError,
    FracstarError,
    InsufficientData,
    PoleError,
    SlowConvergence,
    StarViolation,
    TailError,
    TruncationError,
)
from .gamma import gamma, gamma_ratio_decay_bound, log_gamma, recip_gamma
from .series import (
    CoefficientRule,
    EvaluationReport,
    PowerSeries,
    apply_multipliers,
    evaluate,
    lambda_multiplier,
    radius_estimate,
)
from .wright import (
    ContourConfig,
    WrightParams,
    limit_kernel,
    phi,
    phi_integral,
    phi_limit_gap,
    phi_series,
)
from .star import StarDomain, in_star
from .scale import ScaleElement, ScaleOperatorModel, norm_at, norm_bound_check
from .evolution import (
    CauchyProblem,
    FiniteOperator,
    continuation_sweep,
    power_sequence,
    solve_classical,
    solve_fractional,
    solve_rescaled,
)

__all__ = [
    "__version__",
    "BoundViolation",
    "BranchError",
    "DomainError",
    "FracstarError",
    "InsufficientData",
    "PoleError",
    "SlowConvergence",
    "StarViolation",
    "TailError",
    "TruncationError",
    "CoefficientRule",
    "EvaluationReport",
    "PowerSeries",
    "apply_multipliers",
    "evaluate",
    "lambda_multiplier",
    "radius_estimate",
    "ContourConfig",
    "WrightParams",
    "limit_kernel",
    "phi",
    "phi_integral",
    "phi_limit_gap",
    "phi_series",
    "CauchyProblem",
    "FiniteOperator",
    "continuation_sweep",
    "power_sequence",
    "solve_classical",
    "solve_fractional",
    "solve_rescaled",
    "gamma",
    "gamma_ratio_decay_bound",
    "log_gamma",
    "recip_gamma",
    "StarDomain",
    "in_star",
    "ScaleElement",
    "ScaleOperatorModel",
    "norm_at",
    "norm_bound_check",
]
