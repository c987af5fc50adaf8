"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line; run with ``pytest tests/test_acceptance.py -s``
to see them.
"""

import json
import math
import subprocess
import sys
import time

import mpmath
import pytest
from scipy import integrate

from gammix import (
    BetaPower,
    GridSpec,
    Identity,
    MixtureSpec,
    Pareto,
    beta_mixture_cf,
    beta_mixture_pdf,
    gamma,
    int1_rhs,
    int2_rhs,
    lower_inc_gamma,
    mixture_cf_numeric,
    mixture_pdf_numeric,
    pareto_mixture_cf,
    pareto_mixture_pdf,
    upper_inc_gamma,
    verify_grid,
)
from gammix.cli import canonicalize_json
from gammix.identities import cos_transform_check, mc_cf_check


def report(number, ok, detail):
    print(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def run_grid(identity, nus):
    start = time.perf_counter()
    result = verify_grid(GridSpec(identity, nus, (0.5, 1.0, 2.0), (0.5, 1.0, 2.0), tolerance=1e-6))
    elapsed = time.perf_counter() - start
    worst = max(r.rel_err for r in result.reports)
    return result, worst, elapsed


def test_int1_grid():
    result, worst, elapsed = run_grid(Identity.INT1, (0.6, 1.0, 1.5, 2.5))
    ok = len(result.reports) == 36 and result.all_passed and worst <= 1e-6 and elapsed <= 60
    assert report(1, ok, f"int1 {result.summary()}, max rel err {worst:.2e}, {elapsed:.2f} s")


def test_int2_grid():
    result, worst, elapsed = run_grid(Identity.INT2, (0.25, 0.5, 1.0, 2.0))
    ok = len(result.reports) == 36 and result.all_passed and worst <= 1e-6
    assert report(2, ok, f"int2 {result.summary()}, max rel err {worst:.2e}, {elapsed:.2f} s")


def test_gamma_complement():
    worst = 0.0
    for a in (0.3, 1.0, 2.5, 7.0):
        for x in (0.1, 1.0, 5.0, 20.0):
            total = lower_inc_gamma(a, x) + upper_inc_gamma(a, x)
            worst = max(worst, abs(total - gamma(a)) / gamma(a))
    assert report(3, worst <= 1e-12, f"complement max rel err {worst:.2e}")


def test_negative_parameter_upper_gamma():
    errors = []
    with mpmath.workdps(40):
        for a, x in ((-0.5, 1.0), (-2.3, 0.7)):
            oracle = mpmath.quad(lambda t: t ** (a - 1) * mpmath.exp(-t), [x, 2 * x, 10 * x, mpmath.inf])
            errors.append(abs(upper_inc_gamma(a, x) - float(oracle)) / float(oracle))
    worst = max(errors)
    assert report(4, worst <= 1e-10, f"Gamma(-0.5,1), Gamma(-2.3,0.7) max rel err {worst:.2e}")


def test_closed_forms_match_mixing_expectation():
    lams = (0.6, 0.8, 1.0, 1.5, 2.5)
    args = (0.1, 0.5, 1.0, 2.0, 4.0)
    worst = 0.0
    for lam in lams:
        for name, law, pdf, cf in (
            ("pareto", Pareto(lam), pareto_mixture_pdf, pareto_mixture_cf),
            ("beta", BetaPower(lam), beta_mixture_pdf, beta_mixture_cf),
        ):
            spec = MixtureSpec(law)
            for v in args:
                p_num = mixture_pdf_numeric(spec, v)
                c_num = mixture_cf_numeric(spec, v)
                worst = max(
                    worst,
                    abs(p_num - pdf(lam, v)) / abs(pdf(lam, v)),
                    abs(c_num - cf(lam, v)) / abs(cf(lam, v)),
                )
    assert report(5, worst <= 1e-8, f"pdf/cf closed vs numeric on 5x5 grids, max rel err {worst:.2e}")


def test_cosine_transform():
    reports = [
        cos_transform_check(family, lam, t, tolerance=1e-7)
        for family in ("pareto", "beta")
        for lam in (0.5, 1.0, 2.0)
        for t in (0.5, 1.0, 2.0)
    ]
    worst = max(r.rel_err for r in reports)
    ok = all(r.passed for r in reports)
    assert report(6, ok, f"{sum(r.passed for r in reports)}/{len(reports)} pass, max rel err {worst:.2e}")


def test_monte_carlo_gate():
    start = time.perf_counter()
    reports = [
        mc_cf_check(family, lam, t, n=1_000_000, seed=1000 + i)
        for i, (family, lam, t) in enumerate(
            (f, lam, t) for f in ("pareto", "beta") for lam in (0.5, 1.5) for t in (0.5, 1.0, 2.0)
        )
    ]
    elapsed = time.perf_counter() - start
    worst = max(r.abs_err / r.mc_std_error for r in reports)
    ok = all(r.passed for r in reports) and elapsed <= 30
    assert report(7, ok, f"{sum(r.passed for r in reports)}/{len(reports)} within 4 se, worst {worst:.2f} se, {elapsed:.2f} s")


def test_pdf_normalization():
    worst = 0.0
    for pdf in (pareto_mixture_pdf, beta_mixture_pdf):
        for lam in (0.75, 1.0, 2.0):
            half, _ = integrate.quad(lambda x: pdf(lam, x), 0, 1, epsabs=1e-14, epsrel=1e-13, limit=200)
            tail, _ = integrate.quad(lambda x: pdf(lam, x), 1, math.inf, epsabs=1e-14, epsrel=1e-13, limit=200)
            worst = max(worst, abs(2 * (half + tail) - 1.0))
    assert report(8, worst <= 1e-8, f"max |integral - 1| {worst:.2e}")


def _scaling_errors(rhs, power):
    errors = []
    for nu in (0.6, 1.0, 1.5, 2.5):
        for b in (0.5, 1.0, 2.0):
            for alpha in (0.5, 1.0, 2.0):
                for c in (0.5, 2.0):
                    ref = rhs(nu, b, alpha)
                    errors.append(abs(rhs(nu, c * b, c * c * alpha) * c ** power(nu) - ref) / abs(ref))
    return max(errors)


def test_scaling_int1():
    worst = _scaling_errors(int1_rhs, lambda nu: 2 * nu - 1)
    assert report(9, worst <= 1e-13, f"int1 rhs(nu,cb,c^2 a) c^(2nu-1) = rhs(nu,b,a), max rel err {worst:.2e}")


def test_scaling_int2():
    worst = _scaling_errors(int2_rhs, lambda nu: 2 * nu)
    assert report(9, worst <= 1e-13, f"int2 rhs(nu,cb,c^2 a) c^(2nu) = rhs(nu,b,a), max rel err {worst:.2e}")


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "gammix", *argv], capture_output=True, text=True)


def test_cli_contract(tmp_path):
    codes = {
        0: _cli("eval", "--fn", "gamma", "--a", "2.5").returncode,
        1: _cli("verify", "--identity", "int2", "--nu", "1", "--b", "2", "--tolerance", "1e-300").returncode,
        2: _cli("verify", "--identity", "int1", "--nu", "0.4", "--b", "1").returncode,
        3: _cli("eval", "--fn", "upper-inc-gamma", "--a", "-200", "--x", "1e-5").returncode,
    }
    codes_ok = all(k == v for k, v in codes.items())

    files = [tmp_path / "s1.csv", tmp_path / "s2.csv"]
    for f in files:
        _cli("sample", "--mixing", "beta", "--lambda", "1", "--n", "1000", "--seed", "9", "--output", str(f))
    sample_ok = files[0].read_bytes() == files[1].read_bytes() and len(files[0].read_bytes()) > 0

    out = tmp_path / "grid.json"
    _cli("grid", "--identity", "int2", "--nu", "0.5,1", "--b", "1", "--alpha", "1", "--format", "json", "--output", str(out))
    text = out.read_text(encoding="utf-8")
    json_ok = canonicalize_json(text) == text and json.loads(text)["summary"]["total"] == 2

    ok = codes_ok and sample_ok and json_ok
    assert report(10, ok, f"exit codes {codes}, deterministic sample {sample_ok}, json round trip {json_ok}")
