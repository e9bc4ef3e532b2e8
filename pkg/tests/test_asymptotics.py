import math

import numpy as np
import pytest
from scipy import integrate as sci_integrate
from scipy import special

from fairshare import (
    BOTTOM_HEAVY,
    EQUAL_SPLIT,
    PROPORTIONAL,
    DomainError,
    HarmonicMomentInfinite,
    ObjectKind,
    QuadratureNonConvergence,
    RuleId,
    RuleKindMismatch,
    ZeroDeviation,
)
from fairshare.asymptotics import (
    Extreme,
    GrowthModel,
    adaptive_simpson,
    bh_threshold,
    exact_two_agent_pi,
    exp_integral_Ei,
    expected_extreme,
    exponential,
    fit_growth,
    growth_check,
    harmonic_moment,
    integrate,
    lemma2_bounds,
    mean_abs_deviation,
    monte_carlo_pi,
    pi_bh_limit_bad,
    pi_pro_limit_bad,
    pi_pro_limit_good,
    pi_th_limit_good,
    point_masses,
    poly32,
    power_law,
    second_moment,
    uniform,
    with_atom_at_zero,
)

GOOD, BAD = ObjectKind.GOOD, ObjectKind.BAD
TH1 = RuleId.top_heavy(1)

BUILTINS = {
    "uniform[0,2]": lambda: uniform(0, 2),
    "uniform[0.5,1.5]": lambda: uniform(0.5, 1.5),
    "uniform[3,5]": lambda: uniform(3, 5),
    "exponential": exponential,
    "poly32": poly32,
    "power(0.5)": lambda: power_law(0.5),
    "atoms": lambda: point_masses([0, 2], [0.5, 0.5]),
    "atoms3": lambda: point_masses([1, 2, 6], [0.2, 0.5, 0.3]),
    "mixture": lambda: with_atom_at_zero(uniform(0.5, 1.5), 0.1),
}


# quadrature -------------------------------------------------------------------

@pytest.mark.parametrize("f,a,b,kw", [
    (math.exp, 0.0, 1.0, {}),
    (lambda x: math.exp(-x), 0.0, math.inf, {}),
    (lambda x: 1 / (1 + x * x), 0.0, math.inf, {}),
    (lambda x: x ** -0.5, 0.0, 1.0, {"left_singular": True}),
    (lambda x: abs(x - 0.3), 0.0, 1.0, {"breakpoints": (0.3,)}),
    (lambda x: math.log(x), 0.0, 2.0, {"left_singular": True}),
])
def test_integrate_matches_scipy(f, a, b, kw):
    ref, _ = sci_integrate.quad(f, a, b, epsabs=1e-13, limit=200)
    assert integrate(f, a, b, 1e-10, **kw) == pytest.approx(ref, abs=1e-8)


def test_adaptive_simpson_gives_up():
    with pytest.raises(QuadratureNonConvergence):
        adaptive_simpson(lambda x: math.sin(1 / x) if x else 0.0, 0.0, 1.0, tol=1e-14, max_depth=3)


@pytest.mark.parametrize("x", [-1e-3, -0.1, -0.5, -1.0, -1.5, -3.0, -10.0, -40.0])
def test_ei_matches_scipy(x):
    assert exp_integral_Ei(x) == pytest.approx(special.expi(x), abs=1e-10, rel=1e-10)


def test_ei_values_and_domain():
    assert exp_integral_Ei(-0.5) == pytest.approx(-0.559774, abs=1e-6)
    assert exp_integral_Ei(-1.0) == pytest.approx(-0.219384, abs=1e-6)
    for x in (0.0, 1.0):
        with pytest.raises(DomainError):
            exp_integral_Ei(x)


def test_ei_against_defining_integral():
    x = -0.5
    ref = -integrate(lambda t: math.exp(-t) / t, -x, math.inf, 1e-12)
    assert exp_integral_Ei(x) == pytest.approx(ref, abs=1e-10)


# distributions ----------------------------------------------------------------

@pytest.mark.parametrize("name", BUILTINS)
def test_builtin_is_normalized(name):
    d = BUILTINS[name]()
    assert d.mean == 1.0
    assert d.expect(lambda x: x, 1e-11) == pytest.approx(1.0, abs=1e-9)
    assert d.expect(lambda x: 1.0, 1e-11) == pytest.approx(1.0, abs=1e-8)
    lo, hi = d.support
    grid = np.linspace(lo, min(hi, 30.0), 200)
    F = [d.cdf(t) for t in grid]
    assert all(b >= a - 1e-15 for a, b in zip(F, F[1:]))
    assert d.cdf(hi if math.isfinite(hi) else 1e3) == pytest.approx(1.0, abs=1e-12)
    x = d.sample(np.random.default_rng(0), 200_000)
    assert x.min() >= lo - 1e-12 and x.max() <= hi + 1e-12
    assert x.mean() == pytest.approx(1.0, abs=5 * x.std() / math.sqrt(x.size) + 1e-12)


def test_bad_distribution_parameters():
    for make in (lambda: uniform(2, 1), lambda: power_law(0.8),
                 lambda: point_masses([1, 2], [0.5, 0.6]), lambda: with_atom_at_zero(exponential(), 1.0)):
        with pytest.raises(ValueError):
            make()


# extremes and moments ---------------------------------------------------------

def test_expected_extreme_examples():
    u = uniform(0, 1)
    assert expected_extreme(u, 1) == pytest.approx(1.0, abs=1e-8)
    assert expected_extreme(u, 99) == pytest.approx(1.98, abs=1e-8)
    assert expected_extreme(u, math.inf) == 2.0
    assert expected_extreme(u, 5, Extreme.MIN) == pytest.approx(2 / 6, abs=1e-8)
    e = exponential()
    assert expected_extreme(e, 2) == pytest.approx(1.5, abs=1e-8)
    assert expected_extreme(e, 2, Extreme.MIN) == pytest.approx(0.5, abs=1e-8)
    assert expected_extreme(e, 200) == pytest.approx(sum(1 / k for k in range(1, 201)), abs=1e-7)
    with pytest.raises(ValueError):
        expected_extreme(e, 0)


def test_moments():
    assert second_moment(uniform(0, 2)) == pytest.approx(4 / 3, abs=1e-9)
    assert harmonic_moment(uniform(0.5, 1.5)) == pytest.approx(math.log(3), abs=1e-9)
    assert mean_abs_deviation(exponential()) == pytest.approx(2 / math.e, abs=1e-8)
    assert mean_abs_deviation(uniform(0, 2)) == pytest.approx(0.5, abs=1e-8)
    with pytest.raises(HarmonicMomentInfinite):
        harmonic_moment(uniform(0, 2))
    with pytest.raises(HarmonicMomentInfinite):
        harmonic_moment(point_masses([0, 2], [0.5, 0.5]))


# limit formulas ---------------------------------------------------------------

def test_top_heavy_limits():
    assert pi_th_limit_good(uniform(0, 1), 1, math.inf) == pytest.approx(1 / (1 / 16 + math.log(2)), abs=1e-6)
    ref = 1 / (1 - 2 * math.exp(-0.5) - special.expi(-0.5))
    assert pi_th_limit_good(exponential(), 1, math.inf) == pytest.approx(ref, abs=1e-6)
    assert pi_th_limit_good(uniform(0, 1), 1, 2) == pytest.approx(8 / (5 + 4 * math.log(2)), abs=1e-6)


def test_top_heavy_limit_general_theta():
    # theta enters the formula continuously and theta = 1 is the sharpest
    d = uniform(0, 2)
    vals = [pi_th_limit_good(d, t) for t in (0.25, 0.5, 1.0)]
    assert vals[0] > vals[1] > vals[2] >= 1


def test_proportional_limits():
    assert pi_pro_limit_good(uniform(0, 2), math.inf) == pytest.approx(1.5, abs=1e-6)
    assert pi_pro_limit_good(uniform(0, 2), 2) == pytest.approx(2 / (4 * math.log(2) - 1), abs=1e-6)
    v = pi_pro_limit_good(exponential(), 10_000)
    assert v == pytest.approx(math.log(1e4) / 2, rel=0.15)
    assert pi_pro_limit_good(point_masses([1], [1]), 50) == pytest.approx(1.0, abs=1e-12)
    assert pi_pro_limit_bad(uniform(0.5, 1.5), math.inf) == pytest.approx(2 / math.log(3), abs=1e-6)
    assert pi_pro_limit_bad(point_masses([1], [1]), 50) == pytest.approx(1.0, abs=1e-12)


def test_bottom_heavy_limits():
    d = uniform(0.5, 1.5)
    th = bh_threshold(d)
    assert th.T == pytest.approx(math.e / 2, abs=1e-8)
    assert th.mass == pytest.approx((math.e - 1) / 2, abs=1e-8)
    assert th.gamma == 0.0
    assert pi_bh_limit_bad(d, math.inf) == pytest.approx(math.e - 1, abs=1e-6)
    p = poly32()
    th = bh_threshold(p)
    assert th.T == pytest.approx(2 - 2 / math.sqrt(3), abs=1e-8)
    assert th.mass == pytest.approx(2 / (3 * math.sqrt(3)), abs=1e-8)
    n = 10 ** 6
    lead = 2 / (3 * math.sqrt(math.pi)) * math.sqrt(n)
    assert pi_bh_limit_bad(p, n) == pytest.approx(lead, rel=0.01)
    assert expected_extreme(p, n, Extreme.MIN) == pytest.approx(math.sqrt(math.pi / (3 * n)), rel=0.01)
    assert pi_pro_limit_bad(p, n) / pi_bh_limit_bad(p, n) == pytest.approx(math.sqrt(3), rel=1e-6)


def test_bottom_heavy_threshold_on_an_atom():
    one = point_masses([1], [1])
    th = bh_threshold(one)
    assert (th.T, th.gamma) == (1.0, 1.0)
    assert pi_bh_limit_bad(one, 10) == pytest.approx(1.0, abs=1e-12)


def test_bottom_heavy_limit_errors_and_conventions():
    with pytest.raises(HarmonicMomentInfinite):
        pi_bh_limit_bad(uniform(0, 2), 100)
    with pytest.raises(HarmonicMomentInfinite):
        pi_pro_limit_bad(uniform(0, 2), 100)
    assert pi_bh_limit_bad(point_masses([0, 2], [0.5, 0.5]), 100) == 1.0


def test_lemma2_bounds():
    b = lemma2_bounds(exponential())
    D = 2 / math.e
    assert b.deviation == pytest.approx(D, abs=1e-8)
    assert (b.lower, b.upper) == pytest.approx((1 / D, 2 / D + 4 / D ** 2), abs=1e-6)
    assert b.lower_applies
    u = lemma2_bounds(uniform(0, 2))
    assert u.upper == pytest.approx(20.0, abs=1e-6)
    assert not u.lower_applies
    with pytest.raises(ZeroDeviation):
        lemma2_bounds(point_masses([1], [1]))


@pytest.mark.parametrize("name", ["uniform[0,2]", "uniform[0.5,1.5]", "uniform[3,5]", "exponential", "poly32",
                                  "power(0.5)"])
def test_deviation_upper_bound_holds(name):
    d = BUILTINS[name]()
    b = lemma2_bounds(d)
    v = pi_th_limit_good(d, 1, math.inf)
    assert v <= b.upper
    if b.lower_applies:
        assert v >= b.lower


def test_exact_two_agent_against_dense_quadrature():
    d = uniform(0, 2)
    ref = 2 / (4 * math.log(2) - 1)
    assert exact_two_agent_pi(d, PROPORTIONAL, GOOD) == pytest.approx(ref, abs=1e-7)
    with pytest.raises(ValueError):
        exact_two_agent_pi(point_masses([1, 2], [0.5, 0.5]), PROPORTIONAL, GOOD)


# Monte Carlo ------------------------------------------------------------------

def test_monte_carlo_is_independent_of_workers():
    d = exponential()
    a = monte_carlo_pi(d, TH1, GOOD, 20, 300_000, seed=5, workers=1)
    b = monte_carlo_pi(d, TH1, GOOD, 20, 300_000, seed=5, workers=4)
    assert a == b
    c = monte_carlo_pi(d, TH1, GOOD, 20, 300_000, seed=6, workers=1)
    assert c.mean != a.mean


def test_monte_carlo_two_agents_matches_quadrature():
    d = uniform(0, 1)
    est = monte_carlo_pi(d, TH1, GOOD, 2, 400_000, seed=1)
    assert est.std_error > 0
    assert abs(est.mean - 8 / (5 + 4 * math.log(2))) <= 4 * est.std_error


def test_monte_carlo_equal_split_sanity():
    d = uniform(0, 1)
    est = monte_carlo_pi(d, EQUAL_SPLIT, GOOD, 2, 200_000, seed=2)
    assert abs(est.mean - expected_extreme(d, 2)) <= 4 * est.std_error


def test_monte_carlo_finite_n_formula_exponential():
    # the leading-order formula at n = 200, not its n = inf limit
    d = exponential()
    est = monte_carlo_pi(d, TH1, GOOD, 200, 100_000, seed=11)
    assert est.mean >= 1 - 3 * est.std_error
    assert abs(est.mean - pi_th_limit_good(d, 1, 200)) <= 3 * est.std_error + 0.02 * est.mean


def test_monte_carlo_bad_side():
    d = uniform(0.5, 1.5)
    est = monte_carlo_pi(d, BOTTOM_HEAVY, BAD, 100, 50_000, seed=3)
    assert est.mean >= 1 - 3 * est.std_error
    assert abs(est.mean - pi_bh_limit_bad(d, 100)) <= 3 * est.std_error + 0.03 * est.mean


def test_light_atom_gives_the_conditional_ratio():
    base = uniform(0.5, 1.5)
    mix = with_atom_at_zero(base, 0.01)
    a = monte_carlo_pi(mix, BOTTOM_HEAVY, BAD, 20, 200_000, seed=4)
    b = monte_carlo_pi(base, BOTTOM_HEAVY, BAD, 20, 200_000, seed=5)
    assert abs(a.mean - b.mean) <= 4 * math.hypot(a.std_error, b.std_error)
    assert a.mean > 1.2


def test_heavy_atom_forces_one():
    d = point_masses([0, 2], [0.5, 0.5])
    for rule in (BOTTOM_HEAVY, PROPORTIONAL):
        est = monte_carlo_pi(d, rule, BAD, 50, 10_000, seed=0)
        assert est.mean == 1.0 and est.std_error == 0.0


def test_monte_carlo_errors():
    with pytest.raises(RuleKindMismatch):
        monte_carlo_pi(exponential(), BOTTOM_HEAVY, GOOD, 3, 10, 0)
    with pytest.raises(ValueError):
        monte_carlo_pi(exponential(), TH1, GOOD, 3, 0, 0)


# growth -----------------------------------------------------------------------

def test_fit_growth_on_exact_laws():
    n = np.array([64, 256, 1024])
    r = fit_growth(n, 0.4 * np.sqrt(n), GrowthModel.SQRT_N)
    assert r.consistent and r.coefficient == pytest.approx(0.4) and r.exponent == pytest.approx(1.0)
    r = fit_growth(n, 0.7 * n / np.log(n), GrowthModel.N_OVER_LOG_N)
    assert r.consistent and r.r_squared == pytest.approx(1.0)
    r = fit_growth(n, np.ones(3), GrowthModel.CONSTANT)
    assert r.consistent and r.exponent == pytest.approx(0.0, abs=1e-12)
    assert not fit_growth(n, np.asarray(n, dtype=float), GrowthModel.SQRT_N).consistent


def test_growth_check_constant_on_atoms():
    d = point_masses([0, 2], [0.5, 0.5])
    r = growth_check(d, BOTTOM_HEAVY, BAD, [16, 64, 256], GrowthModel.CONSTANT, samples=2000)
    assert r.consistent
    np.testing.assert_array_equal(r.values, 1.0)


def test_growth_check_grid_validation():
    with pytest.raises(ValueError):
        growth_check(exponential(), TH1, GOOD, [10, 5, 20], GrowthModel.CONSTANT)
    with pytest.raises(ValueError):
        growth_check(exponential(), TH1, GOOD, [10, 20], GrowthModel.CONSTANT)
