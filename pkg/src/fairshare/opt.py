"""Optimal fair prior-dependent rule on a finite prior.

The LP has one variable per (state, agent) pair and is small, so it is
solved with a dense two-phase tableau simplex.  Bland's rule picks both the
entering and the leaving variable, which rules out cycling and makes the
pivot sequence, and hence the returned optimum, deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import DiscreteProblem, ObjectKind, normalize_problem
from .errors import DegenerateDenominator, Infeasible, IterationLimit, Unbounded
from .fairness import social_value

PIVOT_TOL = 1e-9


@dataclass(frozen=True)
class LinearProgram:
    """min or max c.x subject to A_eq x = b_eq, A_ub x <= b_ub, lo <= x <= hi."""

    c: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    A_ub: np.ndarray
    b_ub: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    maximize: bool = False

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        v = c.size

        def rows(A, b):
            A = np.asarray(A, dtype=float).reshape(-1, v)
            b = np.asarray(b, dtype=float).reshape(-1)
            if A.shape[0] != b.size:
                raise ValueError("constraint rows and right-hand sides differ in length")
            return A, b

        A_eq, b_eq = rows(self.A_eq, self.b_eq)
        A_ub, b_ub = rows(self.A_ub, self.b_ub)
        lo = np.broadcast_to(np.asarray(self.lower, dtype=float), (v,)).copy()
        hi = np.broadcast_to(np.asarray(self.upper, dtype=float), (v,)).copy()
        if (lo > hi).any():
            raise ValueError("a lower bound exceeds its upper bound")
        if not np.isfinite(lo).all():
            raise ValueError("every variable needs a finite lower bound")
        for name, val in zip(
            ("c", "A_eq", "b_eq", "A_ub", "b_ub", "lower", "upper"),
            (c, A_eq, b_eq, A_ub, b_ub, lo, hi),
        ):
            object.__setattr__(self, name, val)

    @property
    def n_vars(self) -> int:
        return self.c.size


class LPSolution(NamedTuple):
    x: np.ndarray
    objective: float
    iterations: int


@dataclass(frozen=True)
class StatewiseRule:
    """One allocation per state of a finite prior."""

    allocations: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.allocations, dtype=float)
        if a.ndim != 2:
            raise ValueError("allocations must be a (states, agents) array")
        if (a < -1e-9).any() or (np.abs(a.sum(axis=1) - 1) > 1e-9).any():
            raise ValueError("every row must be a lottery")
        object.__setattr__(self, "allocations", a)


# simplex ----------------------------------------------------------------------

class _Tableau:
    def __init__(self, T, basis, tol, budget):
        self.T = T
        self.basis = basis
        self.tol = tol
        self.budget = budget
        self.iterations = 0

    def pivot(self, r, j):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, j] = 0.0
        T[r, j] = 1.0
        self.basis[r] = j

    def run(self, allowed):
        """Minimize the objective in the last row over columns in ``allowed``."""
        T = self.T
        tol = self.tol
        while True:
            cost = T[-1, :-1]
            entering = [j for j in np.flatnonzero(cost < -tol) if allowed[j]]
            if not entering:
                return
            j = entering[0]
            col = T[:-1, j]
            rhs = T[:-1, -1]
            cand = np.flatnonzero(col > tol)
            if cand.size == 0:
                raise Unbounded("objective is unbounded")
            ratios = rhs[cand] / col[cand]
            best = ratios.min()
            ties = cand[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = min(ties, key=lambda i: self.basis[i])
            if self.iterations >= self.budget:
                raise IterationLimit(f"no optimum after {self.iterations} pivots")
            self.pivot(r, j)
            self.iterations += 1


def simplex_solve(lp: LinearProgram, tol: float = PIVOT_TOL, max_iter: int | None = None) -> LPSolution:
    """Two-phase tableau simplex with Bland's rule.

    The pivot budget defaults to 10 (rows + columns) over both phases.
    """
    v = lp.n_vars
    lo = lp.lower
    shift_eq = lp.b_eq - lp.A_eq @ lo
    shift_ub = lp.b_ub - lp.A_ub @ lo
    finite = np.flatnonzero(np.isfinite(lp.upper))
    bound_rows = np.zeros((finite.size, v))
    bound_rows[np.arange(finite.size), finite] = 1.0
    A_le = np.vstack([lp.A_ub, bound_rows])
    b_le = np.concatenate([shift_ub, lp.upper[finite] - lo[finite]])

    m_eq, m_le = lp.A_eq.shape[0], A_le.shape[0]
    m = m_eq + m_le
    A = np.zeros((m, v + m_le))
    A[:m_eq, :v] = lp.A_eq
    A[m_eq:, :v] = A_le
    A[m_eq:, v:] = np.eye(m_le)
    b = np.concatenate([shift_eq, b_le])
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # rows whose slack is basic and nonnegative need no artificial
    needs_art = np.ones(m, dtype=bool)
    basis = np.full(m, -1)
    for r in range(m_eq, m):
        if not neg[r]:
            needs_art[r] = False
            basis[r] = v + (r - m_eq)
    art_rows = np.flatnonzero(needs_art)
    n_cols = v + m_le + art_rows.size
    T = np.zeros((m + 1, n_cols + 1))
    T[:m, : v + m_le] = A
    T[:m, -1] = b
    for k, r in enumerate(art_rows):
        T[r, v + m_le + k] = 1.0
        basis[r] = v + m_le + k
    budget = 10 * (m + n_cols) if max_iter is None else max_iter
    tab = _Tableau(T, basis, tol, budget)

    # phase 1: minimize the sum of artificials
    n_real = v + m_le
    if art_rows.size:
        T[-1, :] = -T[art_rows].sum(axis=0)
        T[-1, n_real:-1] = 0.0
        tab.run(np.ones(n_cols, dtype=bool))
        if -T[-1, -1] > tol * max(1.0, np.abs(b).max()):
            raise Infeasible("constraints admit no solution")
        # drive zero-level artificials out of the basis, dropping redundant rows
        keep = np.ones(m + 1, dtype=bool)
        for r in range(m):
            if tab.basis[r] < n_real:
                continue
            row = T[r, :n_real]
            nz = np.flatnonzero(np.abs(row) > tol)
            if nz.size:
                tab.pivot(r, nz[0])
            else:
                keep[r] = False
        T = T[keep][:, list(range(n_real)) + [n_cols]]
        tab.T = T
        tab.basis = tab.basis[keep[:-1]]
        m = T.shape[0] - 1

    # phase 2
    c = np.zeros(n_real)
    c[:v] = -lp.c if lp.maximize else lp.c
    T[-1, :] = 0.0
    T[-1, :n_real] = c
    for r in range(m):
        j = tab.basis[r]
        if c[j] != 0:
            T[-1] -= c[j] * T[r]
    tab.run(np.ones(n_real, dtype=bool))

    y = np.zeros(n_real)
    for r in range(m):
        y[tab.basis[r]] = T[r, -1]
    x = y[:v] + lo
    x = np.clip(x, lo, lp.upper)
    objective = math.fsum(lp.c * x)
    return LPSolution(x, objective, tab.iterations)


# fair LP ----------------------------------------------------------------------

def build_fair_lp(p: DiscreteProblem) -> LinearProgram:
    """Variables phi[k, i] flattened row-major: index k * n + i."""
    q = normalize_problem(p)
    K, n = q.values.shape
    weights = (q.probs[:, None] * q.values).reshape(-1)
    A_eq = np.zeros((K, K * n))
    for k in range(K):
        A_eq[k, k * n:(k + 1) * n] = 1.0
    fs = np.zeros((n, K * n))
    for i in range(n):
        fs[i, i::n] = (q.probs * q.values[:, i])
    good = q.kind is ObjectKind.GOOD
    # a >= 1/n is written as -a <= -1/n
    A_ub = -fs if good else fs
    b_ub = np.full(n, -1.0 / n if good else 1.0 / n)
    return LinearProgram(
        c=weights, A_eq=A_eq, b_eq=np.ones(K), A_ub=A_ub, b_ub=b_ub,
        lower=0.0, upper=1.0, maximize=good,
    )


def optimal_fair_rule(p: DiscreteProblem, tol: float = PIVOT_TOL) -> tuple[StatewiseRule, float]:
    q = normalize_problem(p)
    sol = simplex_solve(build_fair_lp(q), tol)
    shares = sol.x.reshape(q.n_states, q.n)
    shares = np.clip(shares, 0.0, 1.0)
    shares /= shares.sum(axis=1, keepdims=True)
    return StatewiseRule(shares), sol.objective


def unconstrained_optimum(p: DiscreteProblem) -> float:
    """E max (good) or E min (bad) of the normalized profile."""
    q = normalize_problem(p)
    best = q.values.max(axis=1) if q.kind is ObjectKind.GOOD else q.values.min(axis=1)
    return math.fsum(q.probs * best)


def _ratio(num, den):
    if not den > 0:
        raise DegenerateDenominator("denominator of the efficiency ratio is not positive")
    return num / den


def pi_ratio(p: DiscreteProblem, rule) -> float:
    """Efficiency loss of ``rule`` against the unconstrained optimum."""
    s = social_value(p, rule)
    best = unconstrained_optimum(p)
    if p.kind is ObjectKind.GOOD:
        return _ratio(best, s)
    return _ratio(s, best)


def opt_ratio(p: DiscreteProblem, rule) -> float:
    """Efficiency loss of ``rule`` against the optimal fair rule."""
    s = social_value(p, rule)
    _, best = optimal_fair_rule(p)
    if p.kind is ObjectKind.GOOD:
        return _ratio(best, s)
    return _ratio(s, best)
