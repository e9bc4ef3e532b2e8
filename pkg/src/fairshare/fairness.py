"""Fair Share accounting and ex-post domination checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import DiscreteProblem, ObjectKind, as_profile, normalize_problem
from .rules import RuleId, allocate, check_theta, total_value_batch

FS_TOL = 1e-9


@dataclass(frozen=True)
class WelfareReport:
    kind: ObjectKind
    per_agent: np.ndarray
    social_value: float
    fs_ok: np.ndarray
    fs_margin: np.ndarray
    means: np.ndarray

    @property
    def n(self) -> int:
        return self.per_agent.size

    @property
    def fair(self) -> bool:
        return bool(self.fs_ok.all())

    @property
    def absolute(self) -> np.ndarray:
        """Expected (dis)utility in each agent's own units."""
        return self.per_agent * self.means


def fair_share_bound(x, i: int, theta: float, kind) -> float:
    """Floor (good) or ceiling (bad) on agent i's share that keeps FS.

    Uses 1/0 = +inf, so a zero-value agent's floor is 0 and its ceiling 1.
    """
    x = as_profile(x)
    kind = ObjectKind(kind)
    theta = check_theta(theta, allow_zero=True)
    n = x.size
    xbar = math.fsum(x) / n
    with np.errstate(over="ignore"):
        ratio = xbar / x[i] if x[i] > 0 else (math.inf if xbar > 0 else 1.0)
    if kind is ObjectKind.GOOD:
        if math.isinf(ratio):
            return 0.0
        return max(1.0 / n + theta / (n - 1) * (1.0 - ratio), 0.0)
    if math.isinf(ratio):
        return 1.0
    return min(1.0 / n + theta / (n - 1) * (ratio - 1.0), 1.0)


def statewise_shares(p: DiscreteProblem, rule) -> np.ndarray:
    """Shares in every state of the normalized problem, shape (K, n).

    ``rule`` is a ``RuleId``, anything with an ``allocations`` array (a
    prior-dependent rule) or a callable mapping a profile to shares.
    """
    q = normalize_problem(p)
    if isinstance(rule, RuleId):
        return np.array([allocate(rule, x, q.kind) for x in q.values])
    allocations = getattr(rule, "allocations", None)
    if allocations is not None:
        return np.asarray(allocations, dtype=float)
    return np.array([np.asarray(rule(x), dtype=float) for x in q.values])


def agent_expected_values(p: DiscreteProblem, rule) -> np.ndarray:
    """E[phi_i(X*) X*_i] for every agent, on the normalized problem."""
    q = normalize_problem(p)
    shares = statewise_shares(q, rule)
    terms = q.probs[:, None] * shares * q.values
    return np.array([math.fsum(terms[:, i]) for i in range(q.n)])


def absolute_expected_values(p: DiscreteProblem, rule) -> np.ndarray:
    return agent_expected_values(p, rule) * p.means()


def social_value(p: DiscreteProblem, rule) -> float:
    return math.fsum(agent_expected_values(p, rule))


def verify_fair_share(p: DiscreteProblem, rule, tol: float = FS_TOL) -> WelfareReport:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    per_agent = agent_expected_values(p, rule)
    n = per_agent.size
    margin = per_agent - 1.0 / n
    if p.kind is ObjectKind.GOOD:
        ok = margin >= -tol
    else:
        ok = margin <= tol
    return WelfareReport(p.kind, per_agent, math.fsum(per_agent), ok, margin, p.means())


# domination -------------------------------------------------------------------

class DominationVerdict(str, Enum):
    DOMINATES = "dominates"        # a weakly better everywhere, strictly somewhere
    DOMINATED = "dominated"        # the same with a and b swapped
    EQUAL = "equal"                # no strict difference on any probe
    INCOMPARABLE = "incomparable"  # each rule strictly better somewhere


@dataclass(frozen=True)
class ProbePlan:
    """Deterministic probe set for a sampled domination check.

    No probe set can prove domination; a verdict only says that nothing in
    this set contradicts it.
    """

    grid_points: int = 21
    grid_max_n: int = 4
    random: int = 10_000
    seed: int = 0
    extra: tuple = ()
    perturb: float = 1e-9
    tol: float = 1e-12


@dataclass(frozen=True)
class DominationResult:
    verdict: DominationVerdict
    a_better: np.ndarray
    b_better: np.ndarray
    n_probes: int

    @property
    def witness_a(self):
        return None if len(self.a_better) == 0 else self.a_better[0]

    @property
    def witness_b(self):
        return None if len(self.b_better) == 0 else self.b_better[0]


def simplex_grid(n: int, points: int) -> np.ndarray:
    """All profiles on the simplex whose coordinates are multiples of 1/(points-1)."""
    k = points - 1
    rows = []
    for bars in itertools.combinations(range(k + n - 1), n - 1):
        cuts = (-1,) + bars + (k + n - 1,)
        rows.append([cuts[j + 1] - cuts[j] - 1 for j in range(n)])
    return np.array(rows, dtype=float) / k


def _near_ties(P, delta):
    out = []
    for x in P:
        for level in np.unique(x):
            idx = np.flatnonzero(x == level)
            if idx.size < 2:
                continue
            for s in (delta, -delta):
                y = x.copy()
                y[idx[0]] = max(y[idx[0]] + s, 0.0)
                out.append(y)
    return np.array(out).reshape(-1, P.shape[1])


def probe_profiles(n: int, plan: ProbePlan = ProbePlan()) -> np.ndarray:
    parts = []
    if n <= plan.grid_max_n and plan.grid_points >= 2:
        parts.append(simplex_grid(n, plan.grid_points))
    if plan.random:
        rng = np.random.default_rng(plan.seed)
        parts.append(rng.dirichlet(np.ones(n), size=plan.random))
    if plan.extra:
        extra = np.array([as_profile(x) for x in plan.extra])
        if extra.shape[1] != n:
            raise ValueError("extra probes must have n entries")
        parts.append(extra)
    P = np.concatenate(parts) if parts else np.empty((0, n))
    if plan.perturb:
        P = np.concatenate([P, _near_ties(P, plan.perturb)])
    return P[P.sum(axis=1) > 0]


def _lexsorted(rows):
    if len(rows) == 0:
        return rows
    return rows[np.lexsort(rows.T[::-1])]


def dominates(a: RuleId, b: RuleId, kind, n: int, probes: ProbePlan = ProbePlan()) -> DominationResult:
    """Compare realized social value of ``a`` and ``b`` on every probe."""
    kind = ObjectKind(kind)
    a.check(kind)
    b.check(kind)
    P = probe_profiles(n, probes)
    va = total_value_batch(a, P, kind)
    vb = total_value_batch(b, P, kind)
    gap = va - vb if kind is ObjectKind.GOOD else vb - va
    tol = probes.tol * np.maximum(1.0, P.sum(axis=1))
    a_better = _lexsorted(P[gap > tol])
    b_better = _lexsorted(P[gap < -tol])
    if len(a_better) and len(b_better):
        verdict = DominationVerdict.INCOMPARABLE
    elif len(a_better):
        verdict = DominationVerdict.DOMINATES
    elif len(b_better):
        verdict = DominationVerdict.DOMINATED
    else:
        verdict = DominationVerdict.EQUAL
    return DominationResult(verdict, a_better, b_better, len(P))
