"""Gamma and incomplete gamma functions for real parameters.

The lower function is only defined for ``a > 0``; the upper one is defined
for every real ``a`` once ``x > 0``, which is what the negative-parameter
mixture formulas need.  Evaluation follows the usual split:

* power series for gamma(a, x) when ``x < a + 1``,
* continued fraction (modified Lentz) for Gamma(a, x) otherwise,
* downward recurrence from ``a + n in (-1/2, 1/2]`` when ``a < 0`` and ``x`` is small,
* a dedicated E1 branch at ``a == 0``.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

__all__ = [
    "GammaAccuracy",
    "DomainError",
    "PoleError",
    "ConvergenceError",
    "gamma",
    "lower_inc_gamma",
    "lower_inc_gamma_scaled",
    "upper_inc_gamma",
    "exp1",
]

EULER_GAMMA = 0.57721566490153286061
_TINY = sys.float_info.min / sys.float_info.epsilon
_LOG_MAX = math.log(sys.float_info.max)
# below this x a negative-a upper gamma is built by recurrence, not the CF
_CF_SMALL_X = 1.0
# zeta(2), zeta(3), ..., zeta(25)
_ZETA = (
    1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381915,
    1.0369277551433699263, 1.0173430619844491397, 1.0083492773819228268,
    1.0040773561979443394, 1.0020083928260822144, 1.0009945751278180853,
    1.0004941886041194646, 1.0002460865533080483, 1.0001227133475784891,
    1.0000612481350587048, 1.0000305882363070205, 1.0000152822594086519,
    1.0000076371976378998, 1.0000038172932649998, 1.0000019082127165539,
    1.0000009539620338728, 1.0000004769329867878, 1.0000002384505027277,
    1.0000001192199259653, 1.0000000596081890513, 1.0000000298035035147,
)


class DomainError(ValueError):
    """Argument outside the function's domain."""


class PoleError(DomainError):
    """Argument sits on a pole of the gamma function."""


class ConvergenceError(ArithmeticError):
    """Iteration budget exhausted, or the result is not representable."""


@dataclass(frozen=True)
class GammaAccuracy:
    rel_tol: float = 1e-12
    max_iterations: int = 500

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


DEFAULT_ACCURACY = GammaAccuracy()
_EPS = sys.float_info.epsilon


def _stop_tol(acc: GammaAccuracy) -> float:
    # loops stop two digits below the target so the result meets it
    return max(acc.rel_tol * 1e-2, _EPS)


def _is_nonpositive_integer(a: float) -> bool:
    return a <= 0 and a == math.floor(a)


def gamma(a: float) -> float:
    """Complete gamma function Gamma(a) for real ``a`` off the poles."""
    if math.isnan(a):
        raise DomainError("a is NaN")
    if _is_nonpositive_integer(a):
        raise PoleError(f"gamma has a pole at a={a!r}")
    try:
        return math.gamma(a)
    except OverflowError as exc:
        raise ConvergenceError(f"gamma({a!r}) overflows double precision") from exc


def _series_sum(a: float, x: float, acc: GammaAccuracy) -> float:
    # sum_{n>=0} x^n / (a (a+1) ... (a+n)) = x^{-a} e^{x} gamma(a, x)
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(acc.max_iterations):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _stop_tol(acc):
            return total
    raise ConvergenceError(
        f"lower incomplete gamma series did not converge for a={a!r}, x={x!r}"
    )


def _upper_cf(a: float, x: float, acc: GammaAccuracy) -> float:
    """Continued fraction for x^{-a} e^{x} Gamma(a, x); any real a, x > 0."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b if b != 0.0 else 1.0 / _TINY
    h = d
    for i in range(1, acc.max_iterations + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _stop_tol(acc):
            return h
    raise ConvergenceError(
        f"upper incomplete gamma continued fraction did not converge for a={a!r}, x={x!r}"
    )


def _power_exp(a: float, x: float) -> float:
    """x**a * exp(-x), raising instead of overflowing."""
    log_val = a * math.log(x) - x
    if log_val > _LOG_MAX:
        raise ConvergenceError(
            f"x^a e^-x overflows double precision for a={a!r}, x={x!r}"
        )
    return math.exp(log_val)


def lower_inc_gamma_scaled(a: float, x: float, acc: GammaAccuracy = DEFAULT_ACCURACY) -> float:
    """Return ``x**(-a) * gamma(a, x)``, finite and equal to ``1/a`` at ``x = 0``.

    Removes the 0 * inf indeterminacy that appears when the lower function is
    multiplied by a negative power of its argument.
    """
    if not a > 0:
        raise DomainError(f"lower incomplete gamma needs a > 0, got a={a!r}")
    if not x >= 0:
        raise DomainError(f"lower incomplete gamma needs x >= 0, got x={x!r}")
    if x == 0.0:
        return 1.0 / a
    if x < a + 1.0:
        return math.exp(-x) * _series_sum(a, x, acc)
    return lower_inc_gamma(a, x, acc) * math.exp(-a * math.log(x))


def lower_inc_gamma(a: float, x: float, acc: GammaAccuracy = DEFAULT_ACCURACY) -> float:
    """Lower incomplete gamma gamma(a, x) = int_0^x t^(a-1) e^(-t) dt."""
    if not a > 0:
        raise DomainError(f"lower incomplete gamma needs a > 0, got a={a!r}")
    if not x >= 0:
        raise DomainError(f"lower incomplete gamma needs x >= 0, got x={x!r}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return gamma(a)
    if x < a + 1.0:
        return _power_exp(a, x) * _series_sum(a, x, acc)
    return gamma(a) - _power_exp(a, x) * _upper_cf(a, x, acc)


def exp1(x: float, acc: GammaAccuracy = DEFAULT_ACCURACY) -> float:
    """Exponential integral E1(x) = Gamma(0, x) for x > 0."""
    if not x > 0:
        raise DomainError(f"E1 needs x > 0, got x={x!r}")
    if math.isinf(x):
        return 0.0
    if x > 1.0:
        return math.exp(-x) * _upper_cf(0.0, x, acc)
    # -gamma_E - ln x - sum_{k>=1} (-x)^k / (k k!)
    term = 1.0
    total = 0.0
    for k in range(1, acc.max_iterations + 1):
        term *= -x / k
        contrib = term / k
        total += contrib
        if abs(contrib) < _stop_tol(acc) * max(abs(total), 1e-300):
            return -EULER_GAMMA - math.log(x) - total
    raise ConvergenceError(f"E1 series did not converge for x={x!r}")


def _gamma1p_m1(s: float) -> float:
    """Gamma(1 + s) - 1, accurate for small s."""
    if abs(s) > 0.2:
        return math.expm1(math.lgamma(1.0 + s))
    # ln Gamma(1+s) = -gamma_E s + sum_{k>=2} (-s)^k zeta(k) / k
    total = -EULER_GAMMA * s
    power = -s
    for k, zeta_k in enumerate(_ZETA, start=2):
        power *= -s
        total += power * zeta_k / k
    return math.expm1(total)


def _upper_small_param(s: float, x: float, acc: GammaAccuracy) -> float:
    """Gamma(s, x) for |s| <= 1 (s != 0) and x < 1, free of the Gamma(s) - gamma(s, x) cancellation."""
    if abs(s) < 1e-100:
        # first-order correction is O(s) relative to E1(x)
        return exp1(x, acc)
    # Gamma(s,x) = (Gamma(1+s) - 1)/s - (x^s - 1)/s - x^s sum_{k>=1} (-x)^k / (k! (s+k))
    log_x = math.log(x)
    head = (_gamma1p_m1(s) - math.expm1(s * log_x)) / s
    term = 1.0
    total = 0.0
    for k in range(1, acc.max_iterations + 1):
        term *= -x / k
        contrib = term / (s + k)
        total += contrib
        if abs(contrib) < _EPS * max(abs(total), 1e-300):
            return head - math.exp(s * log_x) * total
    raise ConvergenceError(f"small-parameter upper gamma series did not converge for s={s!r}, x={x!r}")


def _upper_by_recurrence(a: float, x: float, acc: GammaAccuracy) -> float:
    # Gamma(s-1, x) = (Gamma(s, x) - x^(s-1) e^(-x)) / (s-1), started at s in (-1/2, 1/2]
    n = math.floor(-a)
    s = a + n
    if s <= -0.5:
        s += 1.0
        n += 1
    value = exp1(x, acc) if s == 0.0 else _upper_small_param(s, x, acc)
    for _ in range(n):
        s -= 1.0
        value = (value - _power_exp(s, x)) / s
    if math.isinf(value) or math.isnan(value):
        raise ConvergenceError(
            f"upper incomplete gamma overflows double precision for a={a!r}, x={x!r}"
        )
    return value


def upper_inc_gamma(a: float, x: float, acc: GammaAccuracy = DEFAULT_ACCURACY) -> float:
    """Upper incomplete gamma Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt for real a.

    Needs ``x > 0`` when ``a <= 0`` (the integral diverges at 0 there).
    Near ``x -> 0`` with ``a < 0`` the value grows like ``-x**a / a``; once that
    leaves double range a ConvergenceError is raised rather than returning inf.
    """
    if math.isnan(a) or math.isnan(x):
        raise DomainError("NaN argument")
    if a <= 0:
        if not x > 0:
            raise DomainError(f"upper incomplete gamma with a={a!r} <= 0 needs x > 0, got x={x!r}")
    elif not x >= 0:
        raise DomainError(f"upper incomplete gamma needs x >= 0, got x={x!r}")
    if math.isinf(x):
        return 0.0
    if x == 0.0:
        return gamma(a)
    if a == 0.0:
        return exp1(x, acc)
    if a > 0:
        if x >= a + 1.0:
            return _power_exp(a, x) * _upper_cf(a, x, acc)
        if a <= 0.5:
            return _upper_small_param(a, x, acc)
        return gamma(a) - _power_exp(a, x) * _series_sum(a, x, acc)
    if x >= _CF_SMALL_X:
        return _power_exp(a, x) * _upper_cf(a, x, acc)
    return _upper_by_recurrence(a, x, acc)
