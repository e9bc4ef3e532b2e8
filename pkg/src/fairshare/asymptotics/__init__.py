"""Efficiency of API rules when values are i.i.d. across agents."""

from .distributions import (
    Distribution1D,
    exponential,
    point_masses,
    poly32,
    power_law,
    uniform,
    with_atom_at_zero,
)
from .limits import (
    BHThreshold,
    Extreme,
    Lemma2Bounds,
    bh_threshold,
    expected_extreme,
    harmonic_moment,
    lemma2_bounds,
    mean_abs_deviation,
    pi_bh_limit_bad,
    pi_pro_limit_bad,
    pi_pro_limit_good,
    pi_th_limit_good,
    second_moment,
)
from .montecarlo import (
    GrowthModel,
    GrowthReport,
    MCEstimate,
    exact_two_agent_pi,
    fit_growth,
    growth_check,
    monte_carlo_pi,
)
from .quadrature import adaptive_simpson, exp_integral_Ei, integrate
