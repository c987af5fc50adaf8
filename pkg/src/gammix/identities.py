"""Numerical checks of the two incomplete-gamma cosine integrals and the mixture CF identities.

For ``nu > 1/2``, ``alpha > 0`` and ``b != 0``::

    int_0^inf x^(-2 nu) cos(b x) gamma(nu, alpha x^2) dx
        = sqrt(pi) / 2^(2 nu) * |b|^(2 nu - 1) * Gamma(1/2 - nu, b^2 / (4 alpha))

and for ``nu > 0``::

    int_0^inf x^(2 nu - 1) cos(b x) Gamma(1/2 - nu, alpha x^2) dx
        = 2^(2 nu - 1) sqrt(pi) / |b|^(2 nu) * gamma(nu, b^2 / (4 alpha))

Both come from writing a mixture characteristic function as the cosine
transform of its density, ``2 int_0^inf cos(t x) f(x) dx = phi(t)``, and
rescaling ``x``; those intermediate identities are checked here as well, by
quadrature and by Monte Carlo.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .mixtures import (
    BetaPower,
    MixtureSpec,
    Pareto,
    beta_mixture_cf,
    beta_mixture_pdf,
    empirical_cf,
    pareto_mixture_cf,
    pareto_mixture_pdf,
    sample,
)
from .quadrature import QuadratureOptions, QuadratureResult, integrate_oscillatory_cos
from .special_functions import (
    DomainError,
    lower_inc_gamma,
    lower_inc_gamma_scaled,
    upper_inc_gamma,
)

__all__ = [
    "Identity",
    "Family",
    "IdentityCase",
    "VerificationReport",
    "GridSpec",
    "GridResult",
    "int1_rhs",
    "int1_lhs",
    "int2_rhs",
    "int2_lhs",
    "cos_transform_check",
    "mc_cf_check",
    "verify_case",
    "verify_grid",
    "DEFAULT_TOLERANCE",
    "REL_ERR_FLOOR",
]

DEFAULT_TOLERANCE = 1e-6
REL_ERR_FLOOR = 1e-300
DEFAULT_MC_N = 1_000_000
DEFAULT_K_SIGMA = 4.0
MIN_MC_N = 10_000
_SQRT_PI = math.sqrt(math.pi)


class Identity(str, enum.Enum):
    INT1 = "int1"
    INT2 = "int2"
    COS_TRANSFORM_PARETO = "cos-pareto"
    COS_TRANSFORM_BETA = "cos-beta"
    MC_CF_PARETO = "mc-pareto"
    MC_CF_BETA = "mc-beta"

    @property
    def family(self) -> Optional["Family"]:
        if self in (Identity.COS_TRANSFORM_PARETO, Identity.MC_CF_PARETO):
            return Family.PARETO
        if self in (Identity.COS_TRANSFORM_BETA, Identity.MC_CF_BETA):
            return Family.BETA
        return None

    @property
    def is_monte_carlo(self) -> bool:
        return self in (Identity.MC_CF_PARETO, Identity.MC_CF_BETA)


class Family(str, enum.Enum):
    PARETO = "pareto"
    BETA = "beta"

    def pdf(self, lam: float, x: float) -> float:
        return pareto_mixture_pdf(lam, x) if self is Family.PARETO else beta_mixture_pdf(lam, x)

    def cf(self, lam: float, t: float) -> float:
        return pareto_mixture_cf(lam, t) if self is Family.PARETO else beta_mixture_cf(lam, t)

    def mixing(self, lam: float):
        return Pareto(lam) if self is Family.PARETO else BetaPower(lam)


@dataclass(frozen=True)
class IdentityCase:
    """One parameter point of an identity.

    For the CF checks ``nu`` carries the mixing parameter lambda and ``b`` the
    CF argument t; ``alpha`` is ignored there.
    """

    identity: Identity
    nu: float
    b: float
    alpha: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "identity", Identity(self.identity))
        for name in ("nu", "b", "alpha"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha!r}")
        ident = self.identity
        if ident is Identity.INT1:
            if not self.nu > 0.5:
                raise DomainError(f"int1 requires nu > 1/2, got nu={self.nu!r}")
        elif ident is Identity.INT2:
            if not self.nu > 0:
                raise DomainError(f"int2 requires nu > 0, got nu={self.nu!r}")
        elif not self.nu > 0:
            raise DomainError(f"lambda must be positive, got {self.nu!r}")
        if ident in (Identity.INT1, Identity.INT2) or ident.family and not ident.is_monte_carlo:
            if self.b == 0:
                raise DomainError(f"{ident.value} requires b != 0")


@dataclass(frozen=True)
class VerificationReport:
    case: IdentityCase
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    passed: bool
    tolerance: float
    evaluations: int = 0
    subdivisions: int = 0
    converged: bool = True
    lhs_error_estimate: float = 0.0
    mc_std_error: Optional[float] = None
    seed: Optional[int] = None
    n: Optional[int] = None

    def as_row(self) -> dict:
        """Flat record in the fixed column order used for JSON and CSV output."""
        return {
            "identity": self.case.identity.value,
            "nu": self.case.nu,
            "b": self.case.b,
            "alpha": self.case.alpha,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "pass": self.passed,
            "evals": self.evaluations,
            "subdivisions": self.subdivisions,
            "converged": self.converged,
            "seed": self.seed,
        }


def _relative(abs_err: float, rhs: float) -> float:
    return abs_err / max(abs(rhs), REL_ERR_FLOOR)


def _quadrature_report(
    case: IdentityCase, res: QuadratureResult, rhs: float, tolerance: float
) -> VerificationReport:
    abs_err = abs(res.value - rhs)
    rel_err = _relative(abs_err, rhs)
    return VerificationReport(
        case=case,
        lhs=res.value,
        rhs=rhs,
        abs_err=abs_err,
        rel_err=rel_err,
        passed=bool(res.converged and rel_err <= tolerance),
        tolerance=tolerance,
        evaluations=res.evaluations,
        subdivisions=res.subdivisions,
        converged=res.converged,
        lhs_error_estimate=res.error_estimate,
    )


# --------------------------------------------------------------------------
# the two integral formulas
# --------------------------------------------------------------------------


def int1_rhs(nu: float, b: float, alpha: float) -> float:
    """``sqrt(pi) / 2^(2 nu) * |b|^(2 nu - 1) * Gamma(1/2 - nu, b^2 / (4 alpha))``."""
    IdentityCase(Identity.INT1, nu, b, alpha)
    ab = abs(b)
    return (
        _SQRT_PI * 2.0 ** (-2.0 * nu)
        * math.exp((2.0 * nu - 1.0) * math.log(ab))
        * upper_inc_gamma(0.5 - nu, ab * ab / (4.0 * alpha))
    )


def int1_envelope(nu: float, alpha: float):
    """``x -> x^(-2 nu) gamma(nu, alpha x^2)``; equals ``alpha^nu / nu`` at 0."""
    scale = alpha**nu

    def envelope(x: float) -> float:
        return scale * lower_inc_gamma_scaled(nu, alpha * x * x)

    return envelope


def int1_lhs(
    nu: float, b: float, alpha: float, opts: QuadratureOptions | None = None
) -> QuadratureResult:
    IdentityCase(Identity.INT1, nu, b, alpha)
    return integrate_oscillatory_cos(int1_envelope(nu, alpha), abs(b), 0.0, opts)


def int2_rhs(nu: float, b: float, alpha: float) -> float:
    """``2^(2 nu - 1) sqrt(pi) / |b|^(2 nu) * gamma(nu, b^2 / (4 alpha))``."""
    IdentityCase(Identity.INT2, nu, b, alpha)
    ab = abs(b)
    return (
        2.0 ** (2.0 * nu - 1.0) * _SQRT_PI
        * math.exp(-2.0 * nu * math.log(ab))
        * lower_inc_gamma(nu, ab * ab / (4.0 * alpha))
    )


def int2_envelope(nu: float, alpha: float):
    """``x -> x^(2 nu - 1) Gamma(1/2 - nu, alpha x^2)``, never evaluated at 0."""
    a = 0.5 - nu
    power = 2.0 * nu - 1.0

    def envelope(x: float) -> float:
        return math.exp(power * math.log(x)) * upper_inc_gamma(a, alpha * x * x)

    return envelope


def int2_lhs(
    nu: float, b: float, alpha: float, opts: QuadratureOptions | None = None
) -> QuadratureResult:
    IdentityCase(Identity.INT2, nu, b, alpha)
    return integrate_oscillatory_cos(int2_envelope(nu, alpha), abs(b), 0.0, opts)


# --------------------------------------------------------------------------
# mixture CF identities
# --------------------------------------------------------------------------


def cos_transform_check(
    family: Family | str,
    lam: float,
    t: float,
    opts: QuadratureOptions | None = None,
    tolerance: float = 1e-7,
) -> VerificationReport:
    """Compare ``2 int_0^inf cos(t x) f(x) dx`` with the closed-form CF."""
    family = Family(family)
    ident = Identity.COS_TRANSFORM_PARETO if family is Family.PARETO else Identity.COS_TRANSFORM_BETA
    case = IdentityCase(ident, lam, t)
    res = integrate_oscillatory_cos(lambda x: family.pdf(lam, x), abs(t), 0.0, opts)
    doubled = QuadratureResult(
        2.0 * res.value, 2.0 * res.error_estimate, res.evaluations, res.subdivisions, res.converged
    )
    return _quadrature_report(case, doubled, family.cf(lam, t), tolerance)


def mc_cf_check(
    family: Family | str,
    lam: float,
    t: float,
    n: int = DEFAULT_MC_N,
    seed: int = 42,
    k_sigma: float = DEFAULT_K_SIGMA,
) -> VerificationReport:
    """Monte Carlo check of the closed-form CF: pass iff within ``k_sigma`` standard errors."""
    family = Family(family)
    if n < MIN_MC_N:
        raise DomainError(f"Monte Carlo check needs n >= {MIN_MC_N}, got n={n!r}")
    ident = Identity.MC_CF_PARETO if family is Family.PARETO else Identity.MC_CF_BETA
    case = IdentityCase(ident, lam, t)
    batch = sample(MixtureSpec(family.mixing(lam)), n, seed)
    estimate, std_error = empirical_cf(batch, t)
    rhs = family.cf(lam, t)
    abs_err = abs(estimate - rhs)
    passed = abs_err <= k_sigma * std_error
    return VerificationReport(
        case=case,
        lhs=estimate.real,
        rhs=rhs,
        abs_err=abs_err,
        rel_err=_relative(abs_err, rhs),
        passed=bool(passed),
        tolerance=k_sigma,
        evaluations=n,
        subdivisions=0,
        converged=True,
        mc_std_error=std_error,
        seed=seed,
        n=n,
    )


# --------------------------------------------------------------------------
# dispatch and grids
# --------------------------------------------------------------------------


def verify_case(
    case: IdentityCase,
    opts: QuadratureOptions | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
    n: int = DEFAULT_MC_N,
    seed: int = 42,
    k_sigma: float = DEFAULT_K_SIGMA,
) -> VerificationReport:
    ident = case.identity
    if ident is Identity.INT1:
        return _quadrature_report(
            case, int1_lhs(case.nu, case.b, case.alpha, opts), int1_rhs(case.nu, case.b, case.alpha), tolerance
        )
    if ident is Identity.INT2:
        return _quadrature_report(
            case, int2_lhs(case.nu, case.b, case.alpha, opts), int2_rhs(case.nu, case.b, case.alpha), tolerance
        )
    if ident.is_monte_carlo:
        return mc_cf_check(ident.family, case.nu, case.b, n=n, seed=seed, k_sigma=k_sigma)
    return cos_transform_check(ident.family, case.nu, case.b, opts, tolerance)


@dataclass(frozen=True)
class GridSpec:
    identity: Identity
    nu_values: tuple[float, ...]
    b_values: tuple[float, ...]
    alpha_values: tuple[float, ...] = (1.0,)
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        object.__setattr__(self, "identity", Identity(self.identity))
        for name in ("nu_values", "b_values", "alpha_values"):
            values = tuple(float(v) for v in getattr(self, name))
            if not values:
                raise DomainError(f"{name} must not be empty")
            object.__setattr__(self, name, values)
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        # validate every tuple before anything is computed
        for case in self.cases():
            pass

    def cases(self) -> list[IdentityCase]:
        return [
            IdentityCase(self.identity, nu, b, alpha)
            for nu, b, alpha in product(
                sorted(self.nu_values), sorted(self.b_values), sorted(self.alpha_values)
            )
        ]


@dataclass(frozen=True)
class GridResult:
    reports: list[VerificationReport] = field(default_factory=list)

    @property
    def n_pass(self) -> int:
        return sum(r.passed for r in self.reports)

    @property
    def n_fail(self) -> int:
        return len(self.reports) - self.n_pass

    @property
    def all_passed(self) -> bool:
        return self.n_fail == 0

    def summary(self) -> str:
        return f"{self.n_pass}/{len(self.reports)} pass"


def _run_case(args) -> VerificationReport:
    case, opts, tolerance, n, seed = args
    return verify_case(case, opts, tolerance, n=n, seed=seed)


def verify_grid(
    grid: GridSpec,
    opts: QuadratureOptions | None = None,
    workers: int = 1,
    n: int = DEFAULT_MC_N,
    seed: int = 42,
) -> GridResult:
    """Verify every point of ``grid`` in lexicographic (nu, b, alpha) order.

    Case failures are recorded in the reports, never raised.  ``workers > 1``
    spreads cases over processes; the output order is unaffected.
    """
    jobs = [(case, opts, grid.tolerance, n, seed) for case in grid.cases()]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_case, jobs))
    else:
        reports = [_run_case(job) for job in jobs]
    return GridResult(reports)
