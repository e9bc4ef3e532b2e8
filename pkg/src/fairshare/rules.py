"""Almost prior-independent division rules.

Each rule maps a normalized profile ``x`` to a lottery over agents.  There
are two routes:

* scalar functions (``top_heavy``, ``bottom_heavy`` ...) work on one profile
  and use ``math.fsum`` for every sum, so the result does not depend on the
  order of the agents and symmetry holds exactly;
* ``allocate_batch`` works on an (m, n) array of profiles with vectorized
  numpy code.  It agrees with the scalar route to rounding and is what the
  Monte Carlo and worst-case searches use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import ObjectKind, as_profile
from .errors import InvalidTheta, RuleKindMismatch


class RuleName(str, Enum):
    EQUAL_SPLIT = "es"
    UTILITARIAN = "ut"
    PROPORTIONAL = "pro"
    TOP_HEAVY = "th"
    BOTTOM_HEAVY = "bh"
    BOTTOM_HEAVY_THETA = "bht"


def check_theta(theta, allow_zero=False) -> float:
    theta = float(theta)
    lo_ok = theta >= 0 if allow_zero else theta > 0
    if not (lo_ok and theta <= 1):
        raise InvalidTheta("theta must be in [0,1]" if allow_zero else "theta must be in (0,1]")
    return theta


@dataclass(frozen=True)
class RuleId:
    name: RuleName
    theta: float | None = None

    def __post_init__(self):
        name = RuleName(self.name)
        object.__setattr__(self, "name", name)
        if name is RuleName.TOP_HEAVY:
            object.__setattr__(self, "theta", check_theta(self.theta))
        elif name is RuleName.BOTTOM_HEAVY_THETA:
            object.__setattr__(self, "theta", check_theta(self.theta, allow_zero=True))
        elif self.theta is not None:
            raise InvalidTheta(f"rule {name.value} takes no theta")

    @classmethod
    def top_heavy(cls, theta=1.0):
        return cls(RuleName.TOP_HEAVY, theta)

    @classmethod
    def bottom_heavy(cls, theta=None):
        if theta is None:
            return cls(RuleName.BOTTOM_HEAVY)
        return cls(RuleName.BOTTOM_HEAVY_THETA, theta)

    def compatible(self, kind) -> bool:
        kind = ObjectKind(kind)
        if self.name is RuleName.TOP_HEAVY:
            return kind is ObjectKind.GOOD
        if self.name in (RuleName.BOTTOM_HEAVY, RuleName.BOTTOM_HEAVY_THETA):
            return kind is ObjectKind.BAD
        return True

    def check(self, kind):
        if not self.compatible(kind):
            raise RuleKindMismatch(f"rule {self.label} cannot divide a {ObjectKind(kind).value}")

    @property
    def label(self) -> str:
        if self.theta is None:
            return self.name.value
        return f"{self.name.value}({self.theta:g})"


EQUAL_SPLIT = RuleId(RuleName.EQUAL_SPLIT)
UTILITARIAN = RuleId(RuleName.UTILITARIAN)
PROPORTIONAL = RuleId(RuleName.PROPORTIONAL)
BOTTOM_HEAVY = RuleId(RuleName.BOTTOM_HEAVY)


# scalar route -----------------------------------------------------------------

def _split(n, members):
    out = np.zeros(n)
    out[members] = 1.0 / len(members)
    return out


def equal_split(x) -> np.ndarray:
    x = as_profile(x)
    return np.full(x.size, 1.0 / x.size)


def utilitarian(x, kind) -> np.ndarray:
    x = as_profile(x)
    best = x.max() if ObjectKind(kind) is ObjectKind.GOOD else x.min()
    return _split(x.size, np.flatnonzero(x == best))


def proportional(x, kind) -> np.ndarray:
    x = as_profile(x)
    if ObjectKind(kind) is ObjectKind.GOOD:
        total = math.fsum(x)
        if total == 0:
            return equal_split(x)
        return x / total
    zeros = np.flatnonzero(x == 0)
    if zeros.size:
        return _split(x.size, zeros)
    # 1/x_i relative to the smallest entry keeps every term in (0, 1]
    inv = x.min() / x
    return inv / math.fsum(inv)


def _fill_top(x, lower, top):
    """Non-top agents get ``lower``; the top set splits what is left."""
    out = np.where(top, 0.0, lower)
    rest = max(1.0 - math.fsum(out), 0.0)
    out[top] = rest / top.sum()
    return out


def top_heavy(x, theta=1.0) -> np.ndarray:
    """Top-Heavy rule: non-top agents get exactly their fair-share floor."""
    x = as_profile(x)
    theta = check_theta(theta)
    n = x.size
    top = x == x.max()
    if top.all():
        return equal_split(x)
    xbar = math.fsum(x) / n
    lower = np.zeros(n)
    # tiny positive values may overflow xbar / x_i to inf, i.e. floor 0
    with np.errstate(over="ignore"):
        for i in np.flatnonzero(~top & (x > 0)):
            lower[i] = max(1.0 / n + theta / (n - 1) * (1.0 - xbar / x[i]), 0.0)
    return _fill_top(x, lower, top)


def _fill_bottom(x, bound):
    """Give agents their upper bound in increasing order of ``x``.

    Whole tie groups are admitted while the running total stays <= 1; the
    next group splits the remainder and everyone above it gets nothing.
    """
    n = x.size
    levels = np.unique(x)
    out = np.zeros(n)
    admitted = []
    for level in levels:
        group = np.flatnonzero(x == level)
        trial = admitted + [bound[i] for i in group]
        if math.fsum(trial) <= 1.0:
            admitted = trial
            out[group] = bound[group]
            continue
        rest = max(1.0 - math.fsum(admitted), 0.0)
        out[group] = rest / group.size
        break
    return out


def bottom_heavy(x) -> np.ndarray:
    """Bottom-Heavy rule: cheap agents get their fair-share ceiling."""
    x = as_profile(x)
    n = x.size
    if (x == x[0]).all():
        return equal_split(x)
    total = math.fsum(x)
    bound = np.full(n, math.inf)
    pos = x > 0
    with np.errstate(over="ignore"):
        bound[pos] = (total - x[pos]) / (n * (n - 1) * x[pos])
    return _fill_bottom(x, bound)


def bottom_heavy_theta(x, theta) -> np.ndarray:
    x = as_profile(x)
    theta = check_theta(theta, allow_zero=True)
    n = x.size
    if theta == 0 or (x == x[0]).all():
        return equal_split(x)
    xbar = math.fsum(x) / n
    bound = np.full(n, math.inf)
    pos = x > 0
    with np.errstate(over="ignore"):
        bound[pos] = 1.0 / n + theta / (n - 1) * (xbar / x[pos] - 1.0)
    return _fill_bottom(x, bound)


def allocate(rule: RuleId, x, kind) -> np.ndarray:
    kind = ObjectKind(kind)
    rule.check(kind)
    name = rule.name
    if name is RuleName.EQUAL_SPLIT:
        return equal_split(x)
    if name is RuleName.UTILITARIAN:
        return utilitarian(x, kind)
    if name is RuleName.PROPORTIONAL:
        return proportional(x, kind)
    if name is RuleName.TOP_HEAVY:
        return top_heavy(x, rule.theta)
    if name is RuleName.BOTTOM_HEAVY:
        return bottom_heavy(x)
    return bottom_heavy_theta(x, rule.theta)


# batch route ------------------------------------------------------------------

def _split_mask(mask):
    return mask / mask.sum(axis=1, keepdims=True)


def _th_batch(X, theta):
    m, n = X.shape
    xmax = X.max(axis=1, keepdims=True)
    top = X == xmax
    xbar = X.mean(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        lower = 1.0 / n + theta / (n - 1) * (1.0 - xbar / X)
    lower = np.where(top | (X == 0), 0.0, np.maximum(lower, 0.0))
    rest = np.maximum(1.0 - lower.sum(axis=1, keepdims=True), 0.0)
    out = np.where(top, rest / top.sum(axis=1, keepdims=True), lower)
    flat = top.all(axis=1)
    out[flat] = 1.0 / n
    return out


def _bh_batch(X, theta):
    m, n = X.shape
    order = np.argsort(X, axis=1, kind="stable")
    xs = np.take_along_axis(X, order, axis=1)
    xbar = xs.mean(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        bound = 1.0 / n + theta / (n - 1) * (xbar / xs - 1.0)
    bound = np.where(xs == 0, np.inf, bound)
    csum = np.cumsum(bound, axis=1)
    ends = np.ones_like(xs, dtype=bool)
    ends[:, :-1] = xs[:, 1:] != xs[:, :-1]
    rank = np.arange(1, n + 1)
    t_tilde = np.where(ends & (csum <= 1.0), rank, 0).max(axis=1)
    prefix = rank[None, :] <= t_tilde[:, None]
    out = np.where(prefix, bound, 0.0)
    rows = np.arange(m)
    nxt = xs[rows, np.minimum(t_tilde, n - 1)]
    group = (xs == nxt[:, None]) & ~prefix & (t_tilde < n)[:, None]
    used = out.sum(axis=1)
    k = group.sum(axis=1)
    rest = np.where(k > 0, np.maximum(1.0 - used, 0.0) / np.maximum(k, 1), 0.0)
    out = np.where(group, rest[:, None], out)
    res = np.empty_like(out)
    np.put_along_axis(res, order, out, axis=1)
    flat = (X == X[:, :1]).all(axis=1)
    res[flat] = 1.0 / n
    return res


def allocate_batch(rule: RuleId, X, kind) -> np.ndarray:
    """Vectorized ``allocate`` over the rows of an (m, n) array."""
    kind = ObjectKind(kind)
    rule.check(kind)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] < 2:
        raise ValueError("expected an (m, n) array with n >= 2")
    m, n = X.shape
    name = rule.name
    if name is RuleName.EQUAL_SPLIT:
        return np.full((m, n), 1.0 / n)
    if name is RuleName.UTILITARIAN:
        best = X.max(axis=1, keepdims=True) if kind is ObjectKind.GOOD else X.min(axis=1, keepdims=True)
        return _split_mask(X == best)
    if name is RuleName.PROPORTIONAL:
        if kind is ObjectKind.GOOD:
            total = X.sum(axis=1, keepdims=True)
            with np.errstate(invalid="ignore", divide="ignore"):
                out = X / total
            out[total[:, 0] == 0] = 1.0 / n
            return out
        zero = X == 0
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = X.min(axis=1, keepdims=True) / X
        inv[zero.any(axis=1)] = 0.0
        with np.errstate(invalid="ignore"):
            out = inv / inv.sum(axis=1, keepdims=True)
        has_zero = zero.any(axis=1)
        out[has_zero] = _split_mask(zero[has_zero])
        return out
    if name is RuleName.TOP_HEAVY:
        return _th_batch(X, rule.theta)
    if name is RuleName.BOTTOM_HEAVY:
        return _bh_batch(X, 1.0)
    if rule.theta == 0:
        return np.full((m, n), 1.0 / n)
    return _bh_batch(X, rule.theta)


def total_value_batch(rule: RuleId, X, kind) -> np.ndarray:
    """Realized sum of (dis)utilities, one entry per row of ``X``."""
    X = np.asarray(X, dtype=float)
    return np.einsum("ij,ij->i", allocate_batch(rule, X, kind), X)
