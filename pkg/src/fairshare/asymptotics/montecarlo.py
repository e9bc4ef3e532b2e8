"""Monte Carlo estimates of the efficiency ratio and growth-law fits."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..core import ObjectKind
from ..rules import RuleId, RuleName, allocate, total_value_batch
from .distributions import Distribution1D
from .limits import Extreme, expected_extreme
from .quadrature import integrate

CHUNK_CELLS = 1 << 21


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int


def chunk_rows(n: int) -> int:
    """Profiles per chunk; fixed by n so results never depend on workers."""
    return max(256, CHUNK_CELLS // n)


def _chunk_sums(d, rule, kind, n, seed, index, rows):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))
    X = d.sample(rng, (rows, n))
    total = total_value_batch(rule, X, kind)
    if kind is ObjectKind.GOOD:
        a, b = X.max(axis=1), total
    else:
        a, b = total, X.min(axis=1)
    return np.array([a.sum(), b.sum(), (a * a).sum(), (b * b).sum(), (a * b).sum()])


def monte_carlo_pi(d: Distribution1D, rule: RuleId, kind, n: int, samples: int, seed: int,
                   workers: int = 1) -> MCEstimate:
    """Ratio estimate E max / E S (good) or E S / E min (bad).

    Profiles are drawn in fixed-size chunks, chunk c from a Philox stream
    keyed by (seed, c), and chunk sums are reduced in chunk order, so the
    estimate is bit-identical for any number of workers.  The standard
    error is the delta-method one for a ratio of correlated means.  When
    both totals are zero (every profile has a zero-cost agent under a rule
    that hands it the bad) the ratio is reported as 1.
    """
    kind = ObjectKind(kind)
    rule.check(kind)
    if samples < 1:
        raise ValueError("samples must be at least 1")
    size = chunk_rows(n)
    plan = [(c, min(size, samples - c * size)) for c in range(math.ceil(samples / size))]

    def work(item):
        return _chunk_sums(d, rule, kind, n, seed, *item)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, plan))
    else:
        parts = [work(item) for item in plan]
    sa, sb, saa, sbb, sab = (math.fsum(p[j] for p in parts) for j in range(5))
    N = samples
    if sb == 0:
        if sa == 0:
            return MCEstimate(1.0, 0.0, N, seed)
        return MCEstimate(math.inf, math.inf, N, seed)
    r = sa / sb
    resid = max(saa - 2 * r * sab + r * r * sbb, 0.0)
    se = math.sqrt(resid / (N * max(N - 1, 1))) / (sb / N) if N > 1 else math.inf
    return MCEstimate(r, se, N, seed)


def _two_agent_total(rule, kind):
    if rule.name is RuleName.TOP_HEAVY:
        theta = rule.theta

        def total(x, y):
            lo, hi = min(x, y), max(x, y)
            if lo == hi:
                return lo
            s = max(0.5 + theta * (lo - hi) / (2 * lo), 0.0) if lo > 0 else 0.0
            return s * lo + (1 - s) * hi
        return total
    if rule.name is RuleName.PROPORTIONAL and kind is ObjectKind.GOOD:
        return lambda x, y: (x * x + y * y) / (x + y) if x + y > 0 else 0.0

    def total(x, y):
        s = allocate(rule, [x, y], kind)
        return s[0] * x + s[1] * y
    return total


def exact_two_agent_pi(d: Distribution1D, rule: RuleId, kind, tol: float = 1e-9) -> float:
    """Exact ratio for two i.i.d. agents by nested quadrature (atomless d)."""
    kind = ObjectKind(kind)
    rule.check(kind)
    if d.atoms:
        raise ValueError("two-agent quadrature needs an atomless distribution")
    lo, hi = d.support
    total = _two_agent_total(rule, kind)
    ratios = [1.0]
    if rule.name is RuleName.TOP_HEAVY:
        r = (1 + rule.theta) / rule.theta
        ratios += [r, 1 / r]

    def inner(x):
        cuts = [x * k for k in ratios]
        return d.pdf(x) * integrate(lambda y: total(x, y) * d.pdf(y), lo, hi, tol, cuts)

    social = integrate(inner, lo, hi, tol, d.breakpoints)
    best = expected_extreme(d, 2, Extreme.MAX if kind is ObjectKind.GOOD else Extreme.MIN, tol)
    return best / social if kind is ObjectKind.GOOD else social / best


# growth laws ------------------------------------------------------------------

class GrowthModel(str, Enum):
    SQRT_N = "sqrt-n"
    N_OVER_LOG_N = "n-over-log-n"
    CONSTANT = "constant"

    def predictor(self, n):
        n = np.asarray(n, dtype=float)
        if self is GrowthModel.SQRT_N:
            return np.sqrt(n)
        if self is GrowthModel.N_OVER_LOG_N:
            return n / np.log(n)
        return np.ones_like(n)


@dataclass(frozen=True)
class GrowthReport:
    model: GrowthModel
    n_grid: tuple
    values: np.ndarray
    std_errors: np.ndarray
    coefficient: float
    exponent: float
    r_squared: float
    consistent: bool


def fit_growth(n_grid, values, model, std_errors=None, exponent_tol: float = 0.25) -> GrowthReport:
    """Fit pi = c g(n) through the origin and log pi against log g(n).

    ``coefficient`` is the least-squares c; ``r_squared`` is the uncentered
    R^2 of that fit.  ``exponent`` is the log-log slope against g(n) (against
    n itself for the constant model, where it should vanish).  The fit is
    consistent when R^2 >= 0.95 and the exponent is within ``exponent_tol``
    of its expected value.
    """
    model = GrowthModel(model)
    n = np.asarray(n_grid, dtype=float)
    v = np.asarray(values, dtype=float)
    g = model.predictor(n)
    c = float(g @ v / (g @ g))
    r2 = float(1.0 - np.sum((v - c * g) ** 2) / np.sum(v * v))
    if model is GrowthModel.CONSTANT:
        slope = float(np.polyfit(np.log(n), np.log(v), 1)[0])
        expected = 0.0
    else:
        slope = float(np.polyfit(np.log(g), np.log(v), 1)[0])
        expected = 1.0
    ok = r2 >= 0.95 and abs(slope - expected) <= exponent_tol
    se = np.zeros_like(v) if std_errors is None else np.asarray(std_errors, dtype=float)
    return GrowthReport(model, tuple(int(k) for k in n_grid), v, se, c, slope, r2, ok)


def growth_check(d: Distribution1D, rule: RuleId, kind, n_grid, model, samples: int = 20_000,
                 seed: int = 0, workers: int = 1) -> GrowthReport:
    n_grid = list(n_grid)
    if len(n_grid) < 3 or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ValueError("n_grid must be increasing with at least three points")
    est = [monte_carlo_pi(d, rule, kind, n, samples, seed, workers) for n in n_grid]
    return fit_growth(n_grid, [e.mean for e in est], model, [e.std_error for e in est])
