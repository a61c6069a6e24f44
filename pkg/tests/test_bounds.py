import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ALPHAS, GRID, RATIOS
from geospacing import (
    BoundParams,
    LogRateParams,
    ParameterDomainError,
    closed_form_floor,
    fixed_point_map,
    floor_gap,
    is_admissible_extension,
    lipschitz_bound,
    log_rate_floor,
    map_derivative,
    min_inefficiency,
    solve_rho_star,
)
from geospacing.bounds import ALPHA_CAP, min_inefficiency_excess

PHI = (1 + math.sqrt(5)) / 2


def bisection_oracle(alpha, ratio, digits=60):
    """rho_* - 1 by plain bisection of g(rho) - rho in high precision."""
    with mpmath.workdps(digits):
        a = mpmath.mpf(alpha)
        r = mpmath.mpf(ratio)

        def f(rho):
            return 1 + (r / (1 + rho ** (1 - a))) ** (1 / (a - 1)) - rho

        lo, hi = mpmath.mpf(1), mpmath.mpf(2)
        for _ in range(400):
            mid = (lo + hi) / 2
            if f(mid) > 0:
                lo = mid
            else:
                hi = mid
        return float(lo - 1)


valid_params = st.builds(
    BoundParams.from_ratio,
    st.floats(1.05, 20),
    st.floats(1e-3, 1.0),
)


class TestBoundParams:
    @pytest.mark.parametrize(
        "alpha,m,big_m,msg",
        [(1.0, 1, 1, "alpha must exceed 1"), (0.5, 1, 1, "alpha"), (2, 0, 1, "m must"),
         (2, 2, 1, "M must"), (float("nan"), 1, 1, "finite")],
    )
    def test_invalid(self, alpha, m, big_m, msg):
        with pytest.raises(ParameterDomainError, match=msg):
            BoundParams(alpha, m, big_m)

    def test_ratio(self):
        assert BoundParams(2, 1, 4).ratio == 0.25


class TestFixedPointMap:
    def test_at_one_equals_floor(self):
        p = BoundParams(2, 1, 1)
        assert fixed_point_map(1.0, p) == 1.5 == closed_form_floor(p)

    def test_golden_fixed_point(self):
        assert fixed_point_map(PHI, BoundParams(2, 1, 1)) == pytest.approx(PHI, abs=1e-15)

    def test_at_two(self):
        assert fixed_point_map(2.0, BoundParams(2, 1, 1)) == pytest.approx(5 / 3, abs=1e-15)

    def test_rejects_rho_below_one(self):
        with pytest.raises(ParameterDomainError):
            fixed_point_map(0.9, BoundParams(2, 1, 1))

    @pytest.mark.parametrize("alpha,ratio", GRID)
    def test_maps_unit_interval_into_itself(self, alpha, ratio):
        p = BoundParams.from_ratio(alpha, ratio)
        for k in range(101):
            g = fixed_point_map(1 + k / 100, p)
            assert 1 <= g < 2
            assert g - 1 >= 0


class TestDerivative:
    def test_values(self):
        p = BoundParams(2, 1, 1)
        assert map_derivative(1.0, p) == pytest.approx(0.25, rel=1e-15)
        assert map_derivative(2.0, p) == pytest.approx(1 / 9, rel=1e-15)

    @pytest.mark.parametrize("alpha,ratio", GRID)
    def test_positive_and_matches_finite_differences(self, alpha, ratio):
        p = BoundParams.from_ratio(alpha, ratio)
        h = 1e-6
        for k in range(101):
            rho = 1 + k / 100
            d = map_derivative(rho, p)
            assert d > 0
            lo, hi = rho - h, rho + h  # g extends smoothly below 1, so stay central
            with mpmath.workdps(40):
                # finite differences in high precision so the oracle is not cancellation-limited
                a, r = mpmath.mpf(alpha), mpmath.mpf(ratio)
                g = lambda x: 1 + (r / (1 + x ** (1 - a))) ** (1 / (a - 1))
                fd = float((g(mpmath.mpf(hi)) - g(mpmath.mpf(lo))) / (mpmath.mpf(hi) - mpmath.mpf(lo)))
            assert d == pytest.approx(fd, rel=1e-6)

    @given(valid_params, st.floats(1.0, 2.0))
    def test_bounded_by_lipschitz(self, p, rho):
        assert 0 < map_derivative(rho, p) <= lipschitz_bound(p) * (1 + 1e-12)


class TestClosedFormFloor:
    def test_values(self):
        assert closed_form_floor(BoundParams(2, 1, 1)) == 1.5
        assert closed_form_floor(BoundParams(3, 1, 1)) == pytest.approx(1 + math.sqrt(0.5), rel=1e-15)
        assert closed_form_floor(BoundParams(2, 1, 2)) == 1.25

    def test_small_ratio_limit(self):
        assert closed_form_floor(BoundParams.from_ratio(2, 1e-12)) == pytest.approx(1.0, abs=1e-12)


class TestLipschitz:
    def test_values(self):
        assert lipschitz_bound(BoundParams(2, 1, 1)) == 0.25
        assert lipschitz_bound(BoundParams(3, 1, 1)) == pytest.approx(2**-1.5, rel=1e-15)

    @given(valid_params)
    def test_below_one(self, p):
        assert lipschitz_bound(p) < 1


class TestSolve:
    def test_golden_ratio(self):
        sol = solve_rho_star(BoundParams(2, 1, 1))
        assert sol.rho_star == pytest.approx(PHI, abs=1e-11)
        assert sol.method.value == "agreement_of_both"
        assert sol.residual <= 1e-12

    def test_half_ratio_quadratic(self):
        # alpha = 2 reduces g(rho) = rho to rho^2 - r rho - 1 = 0
        sol = solve_rho_star(BoundParams(2, 1, 2))
        assert sol.rho_star == pytest.approx((1 + math.sqrt(17)) / 4, abs=1e-11)

    @pytest.mark.parametrize("alpha,ratio", GRID)
    def test_matches_bisection_oracle(self, alpha, ratio):
        sol = solve_rho_star(BoundParams.from_ratio(alpha, ratio))
        oracle = bisection_oracle(alpha, ratio)
        assert sol.excess == pytest.approx(oracle, rel=1e-9, abs=1e-11)

    @pytest.mark.parametrize("alpha,ratio", GRID)
    def test_window(self, alpha, ratio):
        p = BoundParams.from_ratio(alpha, ratio)
        sol = solve_rho_star(p)
        assert sol.excess > 0 and sol.deficit > 0
        assert floor_gap(sol, p) > 0
        assert closed_form_floor(p) <= sol.rho_star < 2
        assert all(a < b for a, b in zip(sol.trace, sol.trace[1:]))

    def test_extreme_excess_is_resolved(self):
        p = BoundParams.from_ratio(1.1, 0.01)
        sol = solve_rho_star(p)
        assert sol.rho_star == 1.0  # not representable next to 1 in double precision
        assert sol.excess == pytest.approx(bisection_oracle(1.1, 0.01, digits=80), rel=1e-12)

    def test_underflow_is_reported(self):
        with pytest.raises(ParameterDomainError, match="underflow"):
            solve_rho_star(BoundParams.from_ratio(1.001, 0.5))

    def test_capped_alpha(self):
        p = BoundParams.from_ratio(100.0, 1.0)
        sol = solve_rho_star(p)
        assert sol.capped and 100 > ALPHA_CAP
        assert sol.rho_star == 2.0 - sol.deficit
        assert 0 < sol.deficit < 1e-20

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            solve_rho_star(BoundParams(2, 1, 1), tol=0)

    @pytest.mark.parametrize("ratio", RATIOS)
    def test_monotone_in_alpha(self, ratio):
        values = [solve_rho_star(BoundParams.from_ratio(a, ratio)).rho_star for a in ALPHAS]
        assert all(a <= b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_monotone_in_ratio(self, alpha):
        values = [solve_rho_star(BoundParams.from_ratio(alpha, r)).rho_star for r in sorted(RATIOS)]
        assert all(a <= b for a, b in zip(values, values[1:]))


class TestAdmissibility:
    @pytest.mark.parametrize("alpha,ratio", GRID)
    def test_doubling_always_admissible(self, alpha, ratio):
        assert is_admissible_extension(2.0, BoundParams.from_ratio(alpha, ratio))

    def test_small_step_rejected(self):
        assert not is_admissible_extension(1.01, BoundParams(2, 1, 1))

    @pytest.mark.parametrize("alpha,ratio", GRID)
    def test_boundary(self, alpha, ratio):
        p = BoundParams.from_ratio(alpha, ratio)
        sol = solve_rho_star(p)
        if sol.rho_star > 1:
            assert is_admissible_extension(sol.rho_star, p)
            below = sol.rho_star - 1e-6
            if below > 1:
                assert not is_admissible_extension(below, p)

    def test_requires_rho_above_one(self):
        with pytest.raises(ParameterDomainError):
            is_admissible_extension(1.0, BoundParams(2, 1, 1))


class TestMinInefficiency:
    @pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
    @pytest.mark.parametrize("ratio", [1.0, 0.5, 0.1])
    def test_round_trip(self, alpha, ratio):
        sol = solve_rho_star(BoundParams.from_ratio(alpha, ratio))
        assert min_inefficiency(sol.rho_star, alpha) * ratio == pytest.approx(1.0, rel=1e-8)

    def test_golden(self):
        assert min_inefficiency(PHI, 2.0) == pytest.approx(1.0, rel=1e-14)

    def test_diverges_as_rho_approaches_one(self):
        rhos = [1 + 10.0**-k for k in range(1, 9)]
        for alpha in (1.5, 2.0, 3.0):
            values = [min_inefficiency(r, alpha) for r in rhos]
            assert all(a < b for a, b in zip(values, values[1:]))
            assert values[-1] > 1e3

    def test_printed_form_agrees_only_at_alpha_two(self):
        for rho in (1.2, 1.5, 1.9):
            assert min_inefficiency(rho, 2.0, "printed") == pytest.approx(min_inefficiency(rho, 2.0))
            r3 = min_inefficiency(rho, 3.0)
            assert min_inefficiency(rho, 3.0, "printed") == pytest.approx(r3 ** 0.5)
            assert min_inefficiency(rho, 3.0, "printed") != pytest.approx(r3)

    @pytest.mark.parametrize("rho", [1.0, 2.0, 0.5, float("inf")])
    def test_domain(self, rho):
        with pytest.raises(ParameterDomainError):
            min_inefficiency(rho, 2.0)

    def test_alpha_domain(self):
        with pytest.raises(ParameterDomainError):
            min_inefficiency(1.5, 1.0)
        with pytest.raises(ValueError):
            min_inefficiency_excess(0.5, 2.0, form="other")


class TestLogRateFloor:
    def test_values(self):
        base = BoundParams(3, 1, 1)
        assert log_rate_floor(LogRateParams(base, 1.0, 2.0)) == 1.5
        assert log_rate_floor(LogRateParams(base, 0.0, 1.5)) == pytest.approx(1.25, rel=1e-15)

    def test_gamma_to_one(self):
        base = BoundParams(3, 1, 1)
        assert log_rate_floor(LogRateParams(base, 2.0, 1.01)) == pytest.approx(1.0, abs=1e-29)

    def test_within_window(self):
        base = BoundParams(4, 1, 3)
        for gamma in (1.1, 1.5, 2, 3, 3.9):
            assert 1 < log_rate_floor(LogRateParams(base, 1.0, gamma)) < 2

    @pytest.mark.parametrize("gamma,beta", [(1.0, 1.0), (3.0, 1.0), (3.5, 1.0), (2.0, -1.0)])
    def test_domain(self, gamma, beta):
        with pytest.raises(ParameterDomainError):
            LogRateParams(BoundParams(3, 1, 1), beta, gamma)
