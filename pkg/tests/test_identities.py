import math

import pytest

from gammix.identities import (
    Family,
    GridSpec,
    Identity,
    IdentityCase,
    cos_transform_check,
    int1_envelope,
    int1_lhs,
    int1_rhs,
    int2_envelope,
    int2_lhs,
    int2_rhs,
    mc_cf_check,
    verify_case,
    verify_grid,
)
from gammix.quadrature import integrate_semi_infinite
from gammix.special_functions import DomainError

# Gamma(-1/2, 1/4) from the tail integral int_{1/4}^inf t^(-3/2) e^(-t) dt (mpmath.quad, 40 digits)
INT1_RHS_1_1_1 = 0.62719141641417236499
# mpmath.quadosc of the left-hand integrands, 40 digits
INT1_LHS_0_6_2_0_5 = 0.039283952079412041425
INT1_LHS_2_5_0_5_0_5 = 0.088351375877553231663
# mpmath.quad on [0, 1e-6, 1e-3, 0.1, 1] + quadosc on [1, inf)
INT2_LHS_0_25_1_1 = 3.3792935186405564432
INT2_LHS_2_0_5_2 = 0.10849730464298755994


class TestInt1:
    def test_rhs_value(self):
        tail = integrate_semi_infinite(lambda t: t**-1.5 * math.exp(-t), 0.25).value
        assert math.sqrt(math.pi) / 4 * tail == pytest.approx(INT1_RHS_1_1_1, rel=1e-11)
        assert int1_rhs(1.0, 1.0, 1.0) == pytest.approx(INT1_RHS_1_1_1, rel=1e-13)

    def test_rhs_even_in_b(self):
        for nu, b, alpha in [(0.7, 1.3, 0.4), (2.0, 3.0, 5.0)]:
            assert int1_rhs(nu, b, alpha) == int1_rhs(nu, -b, alpha)

    @pytest.mark.parametrize("c", [0.5, 2.0])
    def test_rhs_scaling(self, c):
        # substituting x -> x/c in the integral gives LHS(cb, c^2 alpha) = c^(2nu-1) LHS(b, alpha)
        nu, b, alpha = 1.5, 1.0, 1.0
        assert int1_rhs(nu, c * b, c * c * alpha) == pytest.approx(c ** (2 * nu - 1) * int1_rhs(nu, b, alpha), rel=1e-13)

    def test_envelope_limit_at_zero(self):
        assert int1_envelope(2.0, 3.0)(0.0) == pytest.approx(4.5, rel=1e-15)
        assert int1_envelope(2.0, 3.0)(1e-9) == pytest.approx(4.5, rel=1e-12)

    def test_lhs_equals_rhs(self):
        res = int1_lhs(1.0, 1.0, 1.0)
        assert res.converged
        assert res.value == pytest.approx(int1_rhs(1.0, 1.0, 1.0), rel=1e-8)

    def test_near_boundary(self):
        res = int1_lhs(0.6, 2.0, 0.5)
        assert res.value == pytest.approx(INT1_LHS_0_6_2_0_5, rel=1e-8)
        assert int1_rhs(0.6, 2.0, 0.5) == pytest.approx(INT1_LHS_0_6_2_0_5, rel=1e-12)

    def test_against_independent_lhs(self):
        assert int1_lhs(2.5, 0.5, 0.5).value == pytest.approx(INT1_LHS_2_5_0_5_0_5, rel=1e-9)

    @pytest.mark.parametrize("nu,b,alpha", [(0.5, 1.0, 1.0), (0.3, 1.0, 1.0), (1.0, 0.0, 1.0), (1.0, 1.0, 0.0)])
    def test_domain(self, nu, b, alpha):
        with pytest.raises(DomainError):
            int1_rhs(nu, b, alpha)
        with pytest.raises(DomainError):
            int1_lhs(nu, b, alpha)

    @pytest.mark.parametrize("c", [0.5, 2.0])
    def test_lhs_scaling(self, c):
        nu, b, alpha = 1.5, 1.0, 1.0
        base = int1_lhs(nu, b, alpha)
        scaled = int1_lhs(nu, c * b, c * c * alpha)
        allowed = scaled.error_estimate + c ** (2 * nu - 1) * base.error_estimate
        assert abs(scaled.value - c ** (2 * nu - 1) * base.value) <= max(allowed, 1e-12)


class TestInt2:
    def test_rhs_closed_case(self):
        expected = math.sqrt(math.pi) / 2 * (1 - math.exp(-1))
        assert int2_rhs(1.0, 2.0, 1.0) == pytest.approx(expected, rel=1e-15)

    def test_rhs_even_in_b(self):
        assert int2_rhs(0.8, -1.7, 0.3) == int2_rhs(0.8, 1.7, 0.3)

    def test_rhs_vanishes_as_alpha_grows(self):
        values = [int2_rhs(1.0, 1.0, a) for a in (1e2, 1e4, 1e8)]
        assert values[0] > values[1] > values[2] > 0
        assert values[2] < 1e-7

    @pytest.mark.parametrize("c", [0.5, 2.0])
    def test_rhs_scaling(self, c):
        nu, b, alpha = 1.3, 0.8, 1.7
        assert int2_rhs(nu, c * b, c * c * alpha) * c ** (2 * nu) == pytest.approx(int2_rhs(nu, b, alpha), rel=1e-13)

    def test_lhs_closed_case(self):
        res = int2_lhs(1.0, 2.0, 1.0)
        assert res.converged
        assert res.value == pytest.approx(int2_rhs(1.0, 2.0, 1.0), rel=1e-8)

    def test_lhs_small_nu(self):
        # Gamma(1/4, x^2) is finite at 0, the x^(-1/2) factor is the singularity
        assert int2_lhs(0.25, 1.0, 1.0).value == pytest.approx(INT2_LHS_0_25_1_1, rel=1e-8)
        assert int2_rhs(0.25, 1.0, 1.0) == pytest.approx(INT2_LHS_0_25_1_1, rel=1e-13)

    def test_lhs_large_nu(self):
        assert int2_lhs(2.0, 0.5, 2.0).value == pytest.approx(INT2_LHS_2_0_5_2, rel=1e-8)
        assert int2_rhs(2.0, 0.5, 2.0) == pytest.approx(INT2_LHS_2_0_5_2, rel=1e-13)

    def test_envelope_finite_near_zero_for_large_nu(self):
        # x^(2nu-1) Gamma(1/2-nu, alpha x^2) -> alpha^(1/2-nu) / (nu - 1/2)
        env = int2_envelope(2.0, 2.0)
        assert env(1e-6) == pytest.approx(2.0**-1.5 / 1.5, rel=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            int2_rhs(0.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            int2_lhs(1.0, 0.0, 1.0)

    @pytest.mark.parametrize("b", [0.7, -0.7])
    def test_lhs_even_in_b(self, b):
        assert int2_lhs(0.5, b, 1.0).value == int2_lhs(0.5, abs(b), 1.0).value


class TestCosTransform:
    def test_pareto(self):
        r = cos_transform_check("pareto", 1.0, 1.0)
        assert r.passed and r.rel_err <= 1e-7

    @pytest.mark.parametrize("family", ["pareto", "beta"])
    def test_small_t(self, family):
        r = cos_transform_check(family, 1.0, 1e-3)
        assert r.passed

    def test_beta_closed_form(self):
        r = cos_transform_check("beta", 1.0, 2.0)
        assert r.lhs == pytest.approx((1 - math.exp(-2)) / 2, rel=1e-7)

    def test_zero_t_rejected(self):
        with pytest.raises(DomainError):
            cos_transform_check("beta", 1.0, 0.0)


class TestMonteCarlo:
    def test_pareto(self):
        r = mc_cf_check(Family.PARETO, 1.5, 1.0, n=1_000_000, seed=42)
        assert r.passed
        assert r.abs_err <= 4 * r.mc_std_error
        assert r.seed == 42 and r.n == 1_000_000

    def test_zero_t(self):
        r = mc_cf_check("beta", 0.7, 0.0, n=10_000, seed=1)
        assert r.abs_err == 0.0 and r.mc_std_error == 0.0 and r.passed

    def test_beta(self):
        assert mc_cf_check("beta", 0.5, 2.0, n=1_000_000, seed=42).passed

    def test_sample_size_floor(self):
        with pytest.raises(DomainError):
            mc_cf_check("pareto", 1.0, 1.0, n=9_999)

    def test_detects_wrong_closed_form(self):
        # a batch from lambda=1.5 compared against the lambda=1.0 closed form should fail
        from gammix.mixtures import MixtureSpec, Pareto, empirical_cf, pareto_mixture_cf, sample

        est, se = empirical_cf(sample(MixtureSpec(Pareto(1.5)), 1_000_000, 42), 1.0)
        assert abs(est - pareto_mixture_cf(1.0, 1.0)) > 4 * se


class TestGrid:
    def test_ordering_and_counts(self):
        grid = GridSpec("int1", [1.5, 0.6], [2.0, 0.5], [1.0])
        result = verify_grid(grid)
        keys = [(r.case.nu, r.case.b, r.case.alpha) for r in result.reports]
        assert keys == sorted(keys)
        assert len(result.reports) == 4 and result.all_passed
        assert result.summary() == "4/4 pass"

    def test_invalid_tuple_rejected_up_front(self):
        with pytest.raises(DomainError):
            GridSpec("int1", [0.4, 1.0], [1.0], [1.0])
        with pytest.raises(DomainError):
            GridSpec("int2", [], [1.0], [1.0])

    def test_failures_are_recorded(self):
        grid = GridSpec("int1", [1.0], [1.0], [1.0], tolerance=1e-30)
        result = verify_grid(grid)
        assert result.n_fail == 1 and not result.reports[0].passed

    def test_parallel_matches_serial(self):
        grid = GridSpec("int2", [0.5, 1.0], [1.0, 2.0], [1.0])
        serial = verify_grid(grid)
        parallel = verify_grid(grid, workers=2)
        assert [r.as_row() for r in serial.reports] == [r.as_row() for r in parallel.reports]

    def test_single_case_dispatch(self):
        r = verify_case(IdentityCase(Identity.INT2, 1.0, 2.0, 1.0))
        assert r.passed and r.rhs == int2_rhs(1.0, 2.0, 1.0)
        assert list(r.as_row()) == [
            "identity", "nu", "b", "alpha", "lhs", "rhs", "abs_err", "rel_err",
            "pass", "evals", "subdivisions", "converged", "seed",
        ]

    def test_even_in_b(self):
        for ident in ("int1", "int2"):
            a = verify_case(IdentityCase(ident, 1.0, 1.5, 0.5))
            b = verify_case(IdentityCase(ident, 1.0, -1.5, 0.5))
            assert a.lhs == b.lhs and a.rhs == b.rhs
