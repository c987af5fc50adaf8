"""Incomplete gamma functions, normal variance mixtures and numeric checks of
the cosine integrals that connect them."""

from .special_functions import (
    ConvergenceError,
    DomainError,
    GammaAccuracy,
    PoleError,
    exp1,
    gamma,
    lower_inc_gamma,
    lower_inc_gamma_scaled,
    upper_inc_gamma,
)
from .quadrature import (
    QuadratureOptions,
    QuadratureResult,
    integrate_finite,
    integrate_oscillatory_cos,
    integrate_semi_infinite,
)
from .mixtures import (
    BetaPower,
    Custom,
    MixtureSpec,
    Pareto,
    SampleBatch,
    beta_mixture_cf,
    beta_mixture_pdf,
    empirical_cf,
    mixture_cf_numeric,
    mixture_pdf_numeric,
    pareto_mgf,
    pareto_mixture_cf,
    pareto_mixture_pdf,
    sample,
)
from .identities import (
    GridSpec,
    Identity,
    IdentityCase,
    VerificationReport,
    cos_transform_check,
    int1_lhs,
    int1_rhs,
    int2_lhs,
    int2_rhs,
    mc_cf_check,
    verify_case,
    verify_grid,
)

__version__ = "0.1.0"
