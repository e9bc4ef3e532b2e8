"""Worst-case efficiency: closed forms, numeric search and hard instances.

For a fair, scale-invariant rule the competitive ratio and the price of
fairness coincide and equal the supremum over profiles x of

    max_i x_i / sum_i phi_i(x) x_i          (good)
    sum_i phi_i(x) x_i / min_i x_i          (bad)

``cr_search`` maximizes that objective numerically.  Scale invariance lets
the search stay inside the box [0, 1]^n.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import DiscreteProblem, ObjectKind, as_profile
from .errors import InvalidM
from .rules import RuleId, RuleName, check_theta, total_value_batch

GOLDEN = (math.sqrt(5) - 1) / 2


class Method(str, Enum):
    CLOSED_FORM = "closed-form"
    SEARCH = "search"
    LP = "lp"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class RatioReport:
    value: float
    method: Method
    witness: object = None
    bounds: tuple[float, float] | None = None


def ratio_objective(rule: RuleId, X, kind) -> np.ndarray:
    """Per-row efficiency loss of ``rule``; 0/0 counts as no loss."""
    kind = ObjectKind(kind)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    total = total_value_batch(rule, X, kind)
    if kind is ObjectKind.GOOD:
        num, den = X.max(axis=1), total
    else:
        num, den = total, X.min(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / den
    out[(num == 0) & (den == 0)] = 1.0
    out[(num > 0) & (den == 0)] = np.inf
    return out


def _structured_starts(rule: RuleId, n: int) -> np.ndarray:
    rows = []
    for size in range(1, n + 1):
        for members in itertools.combinations(range(n), size):
            e = np.zeros(n)
            e[list(members)] = 1.0
            rows.append(e)
    for y in np.linspace(0.0, 1.0, 41):
        head = np.full(n, y)
        head[-1] = 1.0
        rows.append(head)
        tail = np.ones(n)
        tail[0] = y
        rows.append(tail)
    if rule.name is RuleName.TOP_HEAVY:
        y = math.sqrt(rule.theta / (n - 1 + rule.theta))
        head = np.full(n, y)
        head[-1] = 1.0
        rows.append(head)
    return np.array(rows)


def _random_starts(n: int, restarts: int, seed: int) -> np.ndarray:
    rows = np.empty((restarts, n))
    for i in range(restarts):
        rng = np.random.default_rng([seed, i])
        x = rng.dirichlet(np.ones(n))
        rows[i] = x / x.max()
    return rows


def _refine(rule, kind, X, max_sweeps=60, min_width=1e-7, rel_tol=1e-10):
    """Coordinate-wise golden-section ascent, independently for every row."""
    m, n = X.shape
    X = X.copy()
    f = ratio_objective(rule, X, kind)
    width = np.ones(m)
    active = np.isfinite(f)
    for _ in range(max_sweeps):
        if not active.any():
            break
        start = f.copy()
        for i in range(n):
            a = np.maximum(X[:, i] - width, 0.0)
            b = np.minimum(X[:, i] + width, 1.0)
            c = b - GOLDEN * (b - a)
            d = a + GOLDEN * (b - a)
            Y = X.copy()
            Y[:, i] = c
            fc = ratio_objective(rule, Y, kind)
            Y[:, i] = d
            fd = ratio_objective(rule, Y, kind)
            steps = int(math.ceil(math.log(min_width / 2) / math.log(GOLDEN)))
            for _ in range(steps):
                left = fc >= fd
                b = np.where(left, d, b)
                a = np.where(left, a, c)
                p = np.where(left, b - GOLDEN * (b - a), a + GOLDEN * (b - a))
                Y[:, i] = p
                fp = ratio_objective(rule, Y, kind)
                c, d = np.where(left, p, d), np.where(left, c, p)
                fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
            pick_c = fc >= fd
            cand = np.where(pick_c, c, d)
            fcand = np.where(pick_c, fc, fd)
            better = active & (fcand > f)
            X[better, i] = cand[better]
            f = np.where(better, fcand, f)
        gain = (f - start) <= rel_tol * np.abs(start)
        shrink = active & gain
        width = np.where(shrink, width / 4, width)
        active = active & ~(shrink & (width < min_width))
    return X, f


def cr_search(rule: RuleId, n: int, kind, restarts: int = 1000, seed: int = 0) -> RatioReport:
    """Lower-bound certificate for the worst-case ratio of ``rule``.

    Every start is refined on its own, so adding restarts never lowers the
    reported value and the result depends only on (seed, restarts).
    """
    kind = ObjectKind(kind)
    rule.check(kind)
    if n < 2:
        raise ValueError("n must be at least 2")
    if rule.name is RuleName.UTILITARIAN:
        raise ValueError("the ratio search applies to fair rules only")
    starts = np.vstack([_structured_starts(rule, n), _random_starts(n, restarts, seed)])
    X, f = _refine(rule, kind, starts)
    best = int(np.argmax(f))
    witness = X[best] / X[best].sum()
    return RatioReport(float(f[best]), Method.SEARCH, witness)


def bh_two_agent_ratio(t):
    """Exact Bottom-Heavy loss on the two-agent profile (1, t), t >= 1."""
    t = np.asarray(t, dtype=float)
    low = np.minimum(t / 2, 1.0)
    return low + t * (1 - low)


def bh_two_agent_sup() -> RatioReport:
    """(3t - t^2)/2 on [1, 2] peaks at t = 3/2 with value 9/8."""
    t = 1.5
    return RatioReport(float(bh_two_agent_ratio(t)), Method.CLOSED_FORM, np.array([1.0, t]) / (1 + t))


def cr_closed_form_top_heavy(n: int, theta: float) -> float:
    theta = check_theta(theta)
    return n / (2 * math.sqrt((n - 1 + theta) * theta) + 1 - 2 * theta)


def cr_top_heavy_zero_aware(n: int, theta: float) -> tuple[float, int]:
    """Top-Heavy worst case when some agents may value the good at 0.

    With z = k - 1 zero-value agents and the other non-top agents tied, the
    best total over the top value is

        k/n - (n-k)/(n(n-1)) ((k+1) theta - 2 sqrt((n-1+k theta) theta)).

    ``cr_closed_form_top_heavy`` is the k = 1 case.  For theta = 1 and
    n >= 4 a larger k is worse, so the true ratio exceeds that formula.
    Returns (ratio, k).
    """
    theta = check_theta(theta)
    best = None
    for k in range(1, n):
        q = k / n - (n - k) / (n * (n - 1)) * ((k + 1) * theta - 2 * math.sqrt((n - 1 + k * theta) * theta))
        if best is None or q < best[0]:
            best = (q, k)
    return 1.0 / best[0], best[1]


def cr_closed_form_proportional(n: int, kind) -> float:
    if ObjectKind(kind) is ObjectKind.GOOD:
        return (math.sqrt(n) + 1) / 2
    return float(n)


def cr_bounds_bottom_heavy(n: int) -> tuple[float, float]:
    return (n / 4 + 0.5 + 1 / (4 * n), n / 4 + 1.25)


def inf_pof(n: int, kind) -> RatioReport:
    """Smallest price of fairness any fair prior-dependent rule can achieve.

    For a good only bounds are known; the lower bound is reported as is even
    where it drops below 1 (small n).
    """
    if ObjectKind(kind) is ObjectKind.BAD:
        return RatioReport((n + 1) ** 2 / (4 * n), Method.CLOSED_FORM)
    upper = n / (2 * math.sqrt(n) - 1)
    lower = n / (2 * math.sqrt(n) - 0.5)
    return RatioReport(upper, Method.CLOSED_FORM, bounds=(lower, upper))


def hard_instance_good(n: int, m: int) -> DiscreteProblem:
    """m equiprobable states; agent s < m values the good at m in state s only.

    The remaining n - m agents value it at 1 in every state.
    """
    if not 1 <= m <= n - 1:
        raise InvalidM(f"m must lie in [1, {n - 1}]")
    values = np.zeros((m, n))
    values[np.arange(m), np.arange(m)] = m
    values[:, m:] = 1.0
    return DiscreteProblem(ObjectKind.GOOD, np.full(m, 1.0 / m), values)


def hard_instance_bad(n: int) -> DiscreteProblem:
    if n < 2:
        raise ValueError("n must be at least 2")
    x = np.full(n, 2.0)
    x[0] = 4 / (n + 1)
    y = np.zeros(n)
    y[0] = 2 * (n - 1) / (n + 1)
    return DiscreteProblem(ObjectKind.BAD, [0.5, 0.5], [x, y])


def symmetric_problem(x, kind) -> DiscreteProblem:
    """Uniform prior over the distinct permutations of ``x``."""
    x = as_profile(x)
    counts = Counter(itertools.permutations(x.tolist()))
    total = sum(counts.values())
    states = [(c / total, perm) for perm, c in sorted(counts.items())]
    return DiscreteProblem.from_states(kind, states)
