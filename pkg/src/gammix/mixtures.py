"""Normal variance and variance-mean mixtures.

``X = mu + theta * W + sigma * sqrt(W) * Z`` with ``Z ~ N(0, 1)`` independent of
the mixing variable ``W >= 0``.  Two mixing laws have closed-form densities and
characteristic functions in terms of incomplete gamma functions:

* Pareto(lam): density ``lam * w**(-lam - 1)`` on ``[1, inf)``
* BetaPower(lam): density ``lam * w**(lam - 1)`` on ``(0, 1)``

Anything else goes through :class:`Custom` and is handled numerically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .quadrature import (
    QuadratureOptions,
    QuadratureResult,
    integrate_finite,
    integrate_semi_infinite,
)
from .special_functions import (
    ConvergenceError,
    DomainError,
    gamma,
    lower_inc_gamma_scaled,
    upper_inc_gamma,
)

__all__ = [
    "Pareto",
    "BetaPower",
    "Custom",
    "MixingLaw",
    "MixtureSpec",
    "SampleBatch",
    "SamplingError",
    "pareto_mixture_pdf",
    "pareto_mgf",
    "pareto_mixture_cf",
    "beta_mixture_pdf",
    "beta_mixture_cf",
    "mixture_pdf_numeric",
    "mixture_cf_numeric",
    "sample",
    "empirical_cf",
]

_SQRT_PI = math.sqrt(math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
# below this |t| the Pareto CF switches to its small-argument expansion
SMALL_T = 1e-4


class SamplingError(ValueError):
    """The mixing law cannot be sampled by inverse CDF."""


def _check_lambda(lam: float) -> None:
    if not (lam > 0 and math.isfinite(lam)):
        raise DomainError(f"lambda must be a positive finite real, got {lam!r}")


@dataclass(frozen=True)
class Pareto:
    """Pareto mixing law with density ``lam * w**(-lam-1)`` on ``[1, inf)``."""

    lam: float

    def __post_init__(self):
        _check_lambda(self.lam)

    @property
    def support(self) -> tuple[float, float]:
        return (1.0, math.inf)

    def density(self, w: float) -> float:
        return self.lam * w ** (-self.lam - 1.0) if w >= 1.0 else 0.0

    def describe(self) -> str:
        return f"pareto(lambda={self.lam!r})"


@dataclass(frozen=True)
class BetaPower:
    """Beta(lam, 1) mixing law with density ``lam * w**(lam-1)`` on ``(0, 1)``."""

    lam: float

    def __post_init__(self):
        _check_lambda(self.lam)

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, 1.0)

    def density(self, w: float) -> float:
        return self.lam * w ** (self.lam - 1.0) if 0.0 < w < 1.0 else 0.0

    def describe(self) -> str:
        return f"beta(lambda={self.lam!r})"


@dataclass(frozen=True, eq=False)
class Custom:
    """User-supplied mixing density on ``support``, a sub-interval of ``[0, inf)``.

    The density is checked on construction: it must be nonnegative where sampled
    and integrate to one within ``1e-8``.
    """

    density: Callable[[float], float]
    support: tuple[float, float]
    description: str = "custom"
    _mass: float = field(default=math.nan, init=False, repr=False)

    def __post_init__(self):
        lo, hi = self.support
        if not (0.0 <= lo < hi):
            raise DomainError(f"custom support must satisfy 0 <= lo < hi, got {self.support!r}")
        probe = np.linspace(lo, hi if math.isfinite(hi) else lo + 100.0, 203)[1:-1]
        if any(self.density(float(w)) < 0.0 for w in probe):
            raise DomainError("custom mixing density takes negative values")
        mass = _expectation(self.density, self.support, lambda w: 1.0, QuadratureOptions()).value
        if abs(mass - 1.0) > 1e-8:
            raise DomainError(f"custom mixing density integrates to {mass!r}, not 1")
        object.__setattr__(self, "_mass", mass)

    def describe(self) -> str:
        return f"custom({self.description})"


MixingLaw = Union[Pareto, BetaPower, Custom]


@dataclass(frozen=True)
class MixtureSpec:
    """Law of ``mu + theta*W + sigma*sqrt(W)*Z``; defaults give a pure variance mixture."""

    mixing: MixingLaw
    mu: float = 0.0
    theta: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")
        if not (math.isfinite(self.mu) and math.isfinite(self.theta)):
            raise DomainError("mu and theta must be finite")

    @property
    def is_pure(self) -> bool:
        return self.mu == 0.0 and self.theta == 0.0 and self.sigma == 1.0

    def describe(self) -> str:
        return (
            f"{self.mixing.describe()} mu={self.mu!r} theta={self.theta!r} sigma={self.sigma!r}"
        )


@dataclass(frozen=True)
class SampleBatch:
    values: np.ndarray
    seed: int
    n: int
    spec: MixtureSpec | None = None

    def __post_init__(self):
        if len(self.values) != self.n:
            raise ValueError("n does not match the number of values")


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------


def pareto_mixture_pdf(lam: float, x: float) -> float:
    """Density of ``sqrt(W) Z`` for Pareto(lam) mixing.

    Equal to ``2**lam * lam / sqrt(pi) * |x|**(-2 lam - 1) * gamma(lam + 1/2, x**2/2)``.
    The power and the incomplete gamma are combined through the scaled lower
    function, which also gives the ``x = 0`` limit ``lam / ((lam + 1/2) sqrt(2 pi))``.
    """
    _check_lambda(lam)
    s = 0.5 * x * x
    return lam / _SQRT_2PI * lower_inc_gamma_scaled(lam + 0.5, s)


def pareto_mgf(lam: float, u: float) -> float:
    """MGF of Pareto(lam) for ``u <= 0``: ``lam * (-u)**lam * Gamma(-lam, -u)``."""
    _check_lambda(lam)
    if u > 0:
        raise DomainError(f"Pareto MGF diverges for u > 0, got u={u!r}")
    if u == 0:
        return 1.0
    v = -u
    return lam * math.exp(lam * math.log(v)) * upper_inc_gamma(-lam, v)


def _pareto_cf_small(lam: float, s: float) -> float:
    # lam s^lam Gamma(-lam, s) = 1 + lam Gamma(-lam) s^lam - lam sum_{n>=1} (-s)^n / (n! (n - lam))
    total = 1.0 + lam * gamma(-lam) * s**lam
    term = 1.0
    for n in range(1, 30):
        term *= -s / n
        contrib = -lam * term / (n - lam)
        total += contrib
        if abs(contrib) < 1e-17 * abs(total):
            break
    return total


def pareto_mixture_cf(lam: float, t: float) -> float:
    """Characteristic function of the Pareto(lam) variance mixture (real, even in t)."""
    _check_lambda(lam)
    if t == 0:
        return 1.0
    s = 0.5 * t * t
    if abs(t) < SMALL_T and lam != math.floor(lam):
        return _pareto_cf_small(lam, s)
    return pareto_mgf(lam, -s)


def beta_mixture_pdf(lam: float, x: float) -> float:
    """Density of ``sqrt(W) Z`` for BetaPower(lam) mixing.

    Equal to ``2**-lam * lam / sqrt(pi) * |x|**(2 lam - 1) * Gamma(1/2 - lam, x**2/2)``.
    At ``x = 0`` the density is finite only for ``lam > 1/2``, where it equals
    ``lam / (sqrt(2 pi) (lam - 1/2))``.
    """
    _check_lambda(lam)
    if x == 0:
        if lam <= 0.5:
            raise DomainError(f"beta mixture density is infinite at x=0 for lambda={lam!r} <= 1/2")
        return lam / (_SQRT_2PI * (lam - 0.5))
    ax = abs(x)
    s = 0.5 * x * x
    return (
        2.0 ** (-lam) * lam / _SQRT_PI
        * math.exp((2.0 * lam - 1.0) * math.log(ax))
        * upper_inc_gamma(0.5 - lam, s)
    )


def beta_mixture_cf(lam: float, t: float) -> float:
    """Characteristic function ``2**lam * lam * t**(-2 lam) * gamma(lam, t**2/2)``.

    Written as ``lam * s**-lam * gamma(lam, s)`` with ``s = t**2/2``; the scaled
    lower function makes ``t = 0`` (value 1) an ordinary point.
    """
    _check_lambda(lam)
    return lam * lower_inc_gamma_scaled(lam, 0.5 * t * t)


# --------------------------------------------------------------------------
# numeric routes through the mixing expectation
# --------------------------------------------------------------------------


def _expectation(
    density: Callable[[float], float],
    support: tuple[float, float],
    g: Callable[[float], float],
    opts: QuadratureOptions,
    breakpoints: tuple[float, ...] = (),
) -> QuadratureResult:
    """``E[g(W)]`` by quadrature, split at ``breakpoints`` inside the support."""
    lo, hi = support
    cuts = sorted({p for p in breakpoints if lo < p < hi and math.isfinite(p)})
    edges = [lo, *cuts]

    def integrand(w: float) -> float:
        return g(w) * density(w)

    parts = [integrate_finite(integrand, a, b, opts) for a, b in zip(edges, edges[1:])]
    if math.isinf(hi):
        parts.append(integrate_semi_infinite(integrand, edges[-1], opts))
    else:
        parts.append(integrate_finite(integrand, edges[-1], hi, opts))
    return QuadratureResult(
        value=math.fsum(p.value for p in parts),
        error_estimate=sum(p.error_estimate for p in parts),
        evaluations=sum(p.evaluations for p in parts),
        subdivisions=sum(p.subdivisions for p in parts),
        converged=all(p.converged for p in parts),
    )


def _mixing_parts(law: MixingLaw):
    return law.density, law.support


def mixture_pdf_numeric(
    spec: MixtureSpec, x: float, opts: QuadratureOptions | None = None
) -> float:
    """Density of the mixture at ``x`` as ``E_W[N(x; mu + theta W, sigma^2 W)]``.

    Raises ConvergenceError if the quadrature does not meet its tolerance.
    """
    opts = opts or QuadratureOptions()
    density, support = _mixing_parts(spec.mixing)
    var_scale = spec.sigma * spec.sigma
    mu, theta = spec.mu, spec.theta

    def normal_density(w: float) -> float:
        if w <= 0.0:
            return 0.0
        var = var_scale * w
        r = x - mu - theta * w
        return math.exp(-r * r / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)

    # the integrand in w can be a narrow bump far out in the support; cutting
    # at its location keeps the adaptive rule from stepping over it
    r0 = x - mu
    peaks = [r0 * r0 / var_scale]
    if theta != 0.0 and r0 / theta > 0:
        peaks.append(r0 / theta)
    breakpoints = tuple(c * p for p in peaks for c in (0.5, 1.0, 2.0))
    res = _expectation(density, support, normal_density, opts, breakpoints)
    if not res.converged:
        raise ConvergenceError(
            f"mixture pdf quadrature did not converge (estimate {res.value!r}, error {res.error_estimate!r})"
        )
    return res.value


def mixture_cf_numeric(
    spec: MixtureSpec, t: float, opts: QuadratureOptions | None = None
) -> complex:
    """``exp(i mu t) * E_W[exp((i theta t - sigma^2 t^2 / 2) W)]`` by quadrature."""
    opts = opts or QuadratureOptions()
    if t == 0:
        return complex(1.0, 0.0)
    density, support = _mixing_parts(spec.mixing)
    decay = 0.5 * spec.sigma * spec.sigma * t * t
    freq = spec.theta * t

    def re(w: float) -> float:
        return math.exp(-decay * w) * math.cos(freq * w)

    def im(w: float) -> float:
        return math.exp(-decay * w) * math.sin(freq * w)

    re_res = _expectation(density, support, re, opts)
    if freq == 0.0:
        im_res = QuadratureResult(0.0, 0.0, 0, 0, True)
    else:
        im_res = _expectation(density, support, im, opts)
    if not (re_res.converged and im_res.converged):
        raise ConvergenceError("mixture characteristic function quadrature did not converge")
    return cmath.exp(1j * spec.mu * t) * complex(re_res.value, im_res.value)


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------


def _custom_inverse_cdf(law: Custom, grid_size: int = 2049) -> Callable[[np.ndarray], np.ndarray]:
    """Tabulate the CDF of a custom law and return a vectorised inverse."""
    lo, hi = law.support
    semi_infinite = math.isinf(hi)
    # semi-infinite supports are tabulated in u = (w - lo) / (1 + w - lo)
    u_nodes = np.linspace(0.0, 1.0, grid_size)
    if semi_infinite:
        def to_w(u):
            return lo + u / (1.0 - u)

        def cell_density(u: float) -> float:
            return law.density(to_w(u)) / (1.0 - u) ** 2
    else:
        def to_w(u):
            return lo + u * (hi - lo)

        def cell_density(u: float) -> float:
            return law.density(to_w(u)) * (hi - lo)

    opts = QuadratureOptions(abs_tol=1e-14, rel_tol=1e-10, max_subdivisions=50)
    masses = np.empty(grid_size - 1)
    for i in range(grid_size - 1):
        masses[i] = integrate_finite(cell_density, float(u_nodes[i]), float(u_nodes[i + 1]), opts).value
    if np.any(masses < 0) or not np.isfinite(masses).all():
        raise SamplingError("custom mixing law has no invertible CDF tabulation")
    cdf = np.concatenate(([0.0], np.cumsum(masses)))
    total = cdf[-1]
    if not total > 0:
        raise SamplingError("custom mixing law has zero tabulated mass")
    cdf /= total
    keep = np.concatenate(([True], np.diff(cdf) > 0))
    cdf_k, u_k = cdf[keep], u_nodes[keep]
    if len(cdf_k) < 2:
        raise SamplingError("custom mixing law CDF is degenerate")

    def inverse(p: np.ndarray) -> np.ndarray:
        u = np.interp(p, cdf_k, u_k)
        if semi_infinite:
            u = np.minimum(u, 1.0 - 1e-16)
        return to_w(u)

    return inverse


def _draw_mixing(law: MixingLaw, uniforms: np.ndarray) -> np.ndarray:
    # uniforms lie in (0, 1]
    if isinstance(law, Pareto):
        return uniforms ** (-1.0 / law.lam)
    if isinstance(law, BetaPower):
        return uniforms ** (1.0 / law.lam)
    if isinstance(law, Custom):
        return _custom_inverse_cdf(law)(uniforms)
    raise SamplingError(f"unsupported mixing law {law!r}")


def sample(spec: MixtureSpec, n: int, seed: int) -> SampleBatch:
    """Draw ``n`` values of the mixture with a PCG64 stream seeded by ``seed``.

    ``W`` comes from inverse-CDF sampling of one uniform stream and ``Z`` from
    numpy's ziggurat normal sampler on an independent child stream, so the
    output depends only on ``(spec, n, seed)``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    seq = np.random.SeedSequence(seed)
    w_seq, z_seq = seq.spawn(2)
    w_rng = np.random.Generator(np.random.PCG64(w_seq))
    z_rng = np.random.Generator(np.random.PCG64(z_seq))
    uniforms = 1.0 - w_rng.random(n)
    w = _draw_mixing(spec.mixing, uniforms)
    z = z_rng.standard_normal(n)
    values = spec.mu + spec.theta * w + spec.sigma * np.sqrt(w) * z
    return SampleBatch(values=values, seed=seed, n=n, spec=spec)


def sample_mixing(law: MixingLaw, n: int, seed: int) -> np.ndarray:
    """The ``W`` draws that :func:`sample` uses for the same ``(law, n, seed)``."""
    w_seq, _ = np.random.SeedSequence(seed).spawn(2)
    w_rng = np.random.Generator(np.random.PCG64(w_seq))
    return _draw_mixing(law, 1.0 - w_rng.random(n))


def empirical_cf(batch: SampleBatch, t: float) -> tuple[complex, float]:
    """Sample mean of ``exp(i t X)`` and its standard error.

    The standard error is ``sqrt((var(cos tX) + var(sin tX)) / n)``, i.e. the
    root-mean-square error of the complex estimate.
    """
    if batch.n < 2:
        raise ValueError("empirical_cf needs at least two samples")
    phase = t * np.asarray(batch.values, dtype=float)
    c = np.cos(phase)
    s = np.sin(phase)
    estimate = complex(float(c.mean()), float(s.mean()))
    var = float(c.var(ddof=1) + s.var(ddof=1))
    return estimate, math.sqrt(var / batch.n)
