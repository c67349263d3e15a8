"""Asymmetric continuous-time GARCH: simulation and estimation.

The package simulates GJR-COGARCH processes driven by compound Poisson
jumps exactly, evaluates their closed-form moments, and estimates the
parameters (theta, eta, phi, gamma) by a closed-form method of moments
on equidistant returns or by pseudo maximum likelihood on irregular
returns.
"""

__version__ = "0.1.0"

from .errors import (
    AcfFitError,
    CogarchError,
    ConfigError,
    InfeasibleMomentsError,
    IngestError,
    MomentDivergenceError,
    NonstationaryModelError,
    RootSelectionError,
)
from .estimate import (
    EstimateReport,
    MomentSummary,
    MomIntermediates,
    empirical_moments,
    forward_summary,
    mom_fit,
    mom_invert,
    mom_roundtrip,
    pmle_fit,
    pmle_objective,
    pmle_variance_recursion,
)
from .firstjump import (
    FirstJumpScheme,
    build_scheme,
    garch_recursion,
    innovations,
    refinement_study,
)
from .levy import LevySpec, NormalJumps, TwoPointJumps, log_integral, make_rng, sample_jumps
from .model import (
    ParamSet,
    PsiValues,
    ReturnMoments,
    StationarityReport,
    h,
    psi,
    psi_quadrature,
    psi_values,
    return_moments,
    sigma2_autocov,
    sigma2_moment,
    stationarity,
)
from .simulate import ReturnSeries, SimPath, path_from_jumps, returns_on_grid, simulate

__all__ = [
    "__version__",
    "AcfFitError",
    "CogarchError",
    "ConfigError",
    "EstimateReport",
    "FirstJumpScheme",
    "InfeasibleMomentsError",
    "IngestError",
    "LevySpec",
    "MomIntermediates",
    "MomentDivergenceError",
    "MomentSummary",
    "NonstationaryModelError",
    "NormalJumps",
    "ParamSet",
    "PsiValues",
    "ReturnMoments",
    "ReturnSeries",
    "RootSelectionError",
    "SimPath",
    "StationarityReport",
    "TwoPointJumps",
    "build_scheme",
    "empirical_moments",
    "forward_summary",
    "garch_recursion",
    "h",
    "innovations",
    "log_integral",
    "make_rng",
    "mom_fit",
    "mom_invert",
    "mom_roundtrip",
    "path_from_jumps",
    "pmle_fit",
    "pmle_objective",
    "pmle_variance_recursion",
    "psi",
    "psi_quadrature",
    "psi_values",
    "refinement_study",
    "return_moments",
    "returns_on_grid",
    "sample_jumps",
    "sigma2_autocov",
    "sigma2_moment",
    "simulate",
    "stationarity",
]
