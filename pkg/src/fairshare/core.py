"""Problem types, validation, normalization and order statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    InvalidProblem,
    NegativeValue,
    ProbabilitiesDoNotSumToOne,
    ZeroExpectedValue,
)

PROB_TOL = 1e-12


class ObjectKind(str, Enum):
    GOOD = "good"
    BAD = "bad"


@dataclass(frozen=True, eq=False)
class DiscreteProblem:
    """A finite prior over value profiles.

    ``probs`` has shape (K,) and ``values`` has shape (K, n); row k is the
    profile realized in state k.  Arrays are copied and made read-only.
    """

    kind: ObjectKind
    probs: np.ndarray
    values: np.ndarray
    labels: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        kind = ObjectKind(self.kind)
        probs = np.array(self.probs, dtype=float).reshape(-1)
        values = np.array(self.values, dtype=float)
        if values.ndim == 1 and probs.size == 1:
            values = values.reshape(1, -1)
        if values.ndim != 2 or values.shape[0] != probs.size:
            raise InvalidProblem("values must be a (states, agents) array matching probs")
        if probs.size == 0:
            raise InvalidProblem("a problem needs at least one state")
        if values.shape[1] < 2:
            raise InvalidProblem("a problem needs at least two agents")
        labels = None if self.labels is None else tuple(str(s) for s in self.labels)
        if labels is not None and len(labels) != values.shape[1]:
            raise InvalidProblem("one label per agent is required")
        probs.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_states(cls, kind, states, labels=None) -> "DiscreteProblem":
        """Build from an iterable of ``(prob, values)`` pairs."""
        states = list(states)
        if not states:
            raise InvalidProblem("a problem needs at least one state")
        probs = [p for p, _ in states]
        rows = [list(v) for _, v in states]
        if len({len(r) for r in rows}) != 1:
            raise InvalidProblem("every state must list one value per agent")
        return cls(kind, probs, rows, labels)

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def n_states(self) -> int:
        return self.values.shape[0]

    def means(self) -> np.ndarray:
        """Expected value of each agent, summed with ``math.fsum``."""
        return np.array([math.fsum(self.probs * self.values[:, i]) for i in range(self.n)])

    def states(self):
        return [(float(p), self.values[k].copy()) for k, p in enumerate(self.probs)]

    def __eq__(self, other):
        if not isinstance(other, DiscreteProblem):
            return NotImplemented
        return (
            self.kind is other.kind
            and self.labels == other.labels
            and np.array_equal(self.probs, other.probs)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None


@dataclass(frozen=True)
class OrderStats:
    sorted: np.ndarray
    perm: np.ndarray
    top_set: tuple[int, ...]
    level_sets: tuple[tuple[int, ...], ...]

    def level_of_rank(self, t: int) -> tuple[int, ...]:
        """sigma(x; t) for a 1-based rank t."""
        agent = int(self.perm[t - 1])
        for group in self.level_sets:
            if agent in group:
                return group
        raise IndexError(t)


def as_profile(x) -> np.ndarray:
    """Coerce to a float vector and check the profile invariants."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise InvalidProblem("a value profile is a vector")
    if arr.size < 2:
        raise InvalidProblem("a value profile needs at least two agents")
    if np.isnan(arr).any() or np.isinf(arr).any():
        raise InvalidProblem("values must be finite")
    if (arr < 0).any():
        raise NegativeValue("values must be nonnegative")
    return arr


def validate_problem(p: DiscreteProblem) -> DiscreteProblem:
    if not np.isfinite(p.values).all() or not np.isfinite(p.probs).all():
        raise InvalidProblem("values and probabilities must be finite")
    if (p.values < 0).any():
        raise NegativeValue("values must be nonnegative")
    if (p.probs < 0).any() or (p.probs > 1).any():
        raise ProbabilitiesDoNotSumToOne("probabilities must lie in [0, 1]")
    total = math.fsum(p.probs)
    if abs(total - 1.0) > PROB_TOL:
        raise ProbabilitiesDoNotSumToOne(f"probabilities sum to {total!r}")
    means = p.means()
    for i, m in enumerate(means):
        if not m > 0:
            raise ZeroExpectedValue(i)
    return p


def normalize_problem(p: DiscreteProblem) -> DiscreteProblem:
    """Divide each agent's values by that agent's expectation."""
    validate_problem(p)
    means = p.means()
    if np.all(means == 1.0):
        return p
    return DiscreteProblem(p.kind, p.probs, p.values / means, p.labels)


def order_stats(x) -> OrderStats:
    x = as_profile(x)
    perm = np.argsort(x, kind="stable")
    xs = x[perm]
    groups = []
    start = 0
    for t in range(1, len(xs) + 1):
        if t == len(xs) or xs[t] != xs[start]:
            groups.append(tuple(sorted(int(a) for a in perm[start:t])))
            start = t
    return OrderStats(sorted=xs, perm=perm, top_set=groups[-1], level_sets=tuple(groups))


def indicator(n: int, members) -> np.ndarray:
    """e^M / |M|, the equal lottery over a nonempty set of agents."""
    e = np.zeros(n)
    members = list(members)
    e[members] = 1.0 / len(members)
    return e
