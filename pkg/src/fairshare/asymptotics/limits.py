"""Efficiency of API rules under i.i.d. priors: leading-order formulas."""

from __future__ import annotations

import math
from enum import Enum
from typing import NamedTuple

from ..errors import (
    HarmonicMomentInfinite,
    NoFiniteT,
    QuadratureNonConvergence,
    ZeroDeviation,
)
from ..rules import PROPORTIONAL, RuleId, check_theta
from ..core import ObjectKind
from .distributions import Distribution1D
from .quadrature import integrate

QUAD_TOL = 1e-10


class Extreme(str, Enum):
    MAX = "max"
    MIN = "min"


def _is_inf(n) -> bool:
    return isinstance(n, float) and math.isinf(n)


def expected_extreme(d: Distribution1D, n, which=Extreme.MAX, tol: float = 1e-8) -> float:
    """E max or E min of n i.i.d. draws; n may be ``math.inf``."""
    which = Extreme(which)
    lo, hi = d.support
    if _is_inf(n):
        return hi if which is Extreme.MAX else lo
    if n < 1:
        raise ValueError("n must be at least 1")
    if which is Extreme.MAX:
        def g(t):
            s = d.sf(t)
            if s <= 0:
                return 0.0
            if s >= 1:
                return 1.0
            return -math.expm1(n * math.log1p(-s))
    else:
        def g(t):
            s = d.sf(t)
            return s ** n if s > 0 else 0.0
    return lo + integrate(g, lo, hi, tol, d.breakpoints)


def harmonic_moment(d: Distribution1D) -> float:
    """E(1/X), raising when it is infinite."""
    if any(loc == 0 for loc, _ in d.atoms):
        raise HarmonicMomentInfinite("an atom at zero makes E(1/X) infinite")
    try:
        return d.expect(lambda x: 1.0 / x if x > 0 else math.inf, QUAD_TOL)
    except QuadratureNonConvergence as exc:
        raise HarmonicMomentInfinite("E(1/X) diverges") from exc


def second_moment(d: Distribution1D) -> float:
    return d.expect(lambda x: x * x, QUAD_TOL)


def mean_abs_deviation(d: Distribution1D, tol: float = 1e-10) -> float:
    return d.expect(lambda x: abs(x - 1.0), tol, breakpoints=(1.0,))


def pi_th_limit_good(d: Distribution1D, theta: float = 1.0, n=math.inf) -> float:
    """Top-Heavy efficiency ratio for a good, to leading order in n.

    At n = 2 the exact value is returned instead (two-agent quadrature),
    since the leading-order expression is not accurate there.
    """
    theta = check_theta(theta)
    if n == 2 and not d.atoms:
        from .montecarlo import exact_two_agent_pi
        return exact_two_agent_pi(d, RuleId.top_heavy(theta), ObjectKind.GOOD)
    kink = (theta / (1 + theta),)
    a = d.expect(lambda x: max(1 + theta - theta / x, 0.0) if x > 0 else 0.0, QUAD_TOL, kink)
    b = d.expect(lambda x: max(x * (1 + theta) - theta, 0.0), QUAD_TOL, kink)
    emax = expected_extreme(d, n, Extreme.MAX)
    tail = 0.0 if math.isinf(emax) else b / emax
    return 1.0 / (1.0 - a + tail)


def pi_pro_limit_good(d: Distribution1D, n=math.inf) -> float:
    if n == 2 and not d.atoms:
        from .montecarlo import exact_two_agent_pi
        return exact_two_agent_pi(d, PROPORTIONAL, ObjectKind.GOOD)
    return expected_extreme(d, n, Extreme.MAX) / second_moment(d)


class BHThreshold(NamedTuple):
    T: float
    gamma: float
    mass: float  # P(X < T) + gamma P(X = T)


def bh_threshold(d: Distribution1D, tol: float = 1e-10) -> BHThreshold:
    """Solve E(1{X<T}/X) + gamma P(X=T)/T = 1 for (T, gamma)."""
    lo, hi = d.support

    def g_le(t):
        """E(1{X <= t}/X); infinite when the integral diverges."""
        total = math.fsum(m / loc if loc > 0 else math.inf for loc, m in d.atoms if loc <= t)
        if d._pdf0 is not None and t > lo:
            try:
                total += integrate(lambda x: d.pdf(x) / x if x > 0 else math.nan,
                                   lo, min(t, hi), QUAD_TOL, d.breakpoints, d.singular_at_lo)
            except QuadratureNonConvergence:
                return math.inf
        return total

    top = hi
    if math.isinf(top):
        top = max(lo, 1.0)
        while g_le(top) < 1.0:
            top *= 2
            if top > 1e12:
                raise NoFiniteT("E(1/X) never reaches 1")
    elif g_le(top) < 1.0:
        raise NoFiniteT("E(1/X) < 1 on the whole support")
    a, b = lo, top
    if g_le(a) >= 1.0:
        b = a
    while b - a > tol:
        mid = 0.5 * (a + b)
        if g_le(mid) >= 1.0:
            b = mid
        else:
            a = mid
    T = b
    atom = math.fsum(m for loc, m in d.atoms if abs(loc - T) <= 2 * tol)
    if atom > 0:
        T = next(loc for loc, m in d.atoms if abs(loc - T) <= 2 * tol)
        below = math.fsum(m / loc for loc, m in d.atoms if 0 < loc < T)
        if d._pdf0 is not None and T > lo:
            below += integrate(lambda x: d.pdf(x) / x if x > 0 else math.nan,
                               lo, T, QUAD_TOL, d.breakpoints, d.singular_at_lo)
        gamma = min(max((1.0 - below) * T / atom, 0.0), 1.0)
        return BHThreshold(T, gamma, d.mass_below(T) + gamma * atom)
    if T - lo <= 2 * tol and d._pdf0 is not None:
        raise HarmonicMomentInfinite("E(1{X<T}/X) diverges for every T > 0")
    return BHThreshold(T, 0.0, d.mass_below(T))


def pi_bh_limit_bad(d: Distribution1D, n=math.inf) -> float:
    """Bottom-Heavy efficiency ratio for a bad, to leading order in n."""
    if any(loc == 0 for loc, _ in d.atoms):
        # some agent has zero cost almost surely in the limit; 0/0 reads as 1
        return 1.0
    th = bh_threshold(d)
    emin = expected_extreme(d, n, Extreme.MIN)
    return math.inf if emin == 0 else th.mass / emin


def pi_pro_limit_bad(d: Distribution1D, n=math.inf) -> float:
    h = harmonic_moment(d)
    emin = expected_extreme(d, n, Extreme.MIN)
    return math.inf if emin == 0 else 1.0 / (emin * h)


class Lemma2Bounds(NamedTuple):
    lower: float
    upper: float
    lower_applies: bool
    deviation: float


def lemma2_bounds(d: Distribution1D) -> Lemma2Bounds:
    """Sandwich for the limiting Top-Heavy ratio from the mean absolute deviation D.

    The lower bound 1/D only holds for unbounded support.
    """
    D = mean_abs_deviation(d)
    if D <= 1e-12:
        raise ZeroDeviation("the distribution is a point mass at its mean")
    return Lemma2Bounds(1.0 / D, 2.0 / D + 4.0 / D ** 2, math.isinf(d.support[1]), D)
