"""One-dimensional value distributions, always rescaled to unit mean."""

from __future__ import annotations

import math

import numpy as np

from .quadrature import integrate

MEAN_TOL = 1e-13


class Distribution1D:
    """A law on [0, inf) given by an absolutely continuous part plus atoms.

    The constructor takes an unscaled description and divides it by its
    mean, so ``mean`` is 1 for every instance.  ``pdf`` covers the
    continuous part only and integrates to 1 minus the atom masses.
    ``sampler(rng, size)`` draws from the unscaled law.
    """

    def __init__(self, name, *, cdf, sampler, support, pdf=None, sf=None, atoms=(),
                 breakpoints=(), singular_at_lo=False):
        lo, hi = map(float, support)
        atoms = tuple((float(loc), float(mass)) for loc, mass in atoms)
        sf0 = sf if sf is not None else (lambda t: 1.0 - cdf(t))
        kinks = tuple(breakpoints) + tuple(loc for loc, _ in atoms)
        if pdf is None and atoms:
            # purely atomic: the mean is an exact finite sum
            raw_mean = math.fsum(loc * mass for loc, mass in atoms)
        else:
            raw_mean = lo + integrate(sf0, lo, hi, MEAN_TOL, kinks, singular_at_lo)
        if not raw_mean > 0:
            raise ValueError("distribution must have a positive mean")
        s = 1.0 / raw_mean
        self.name = name
        self.scale = s
        self.support = (lo * s, hi * s)
        self.atoms = tuple((loc * s, mass) for loc, mass in atoms)
        self.breakpoints = tuple(sorted({b * s for b in breakpoints} | {loc for loc, _ in self.atoms}))
        self.singular_at_lo = singular_at_lo
        self._pdf0 = pdf
        self._cdf0 = cdf
        self._sf0 = sf0
        self._sampler0 = sampler
        self.mean = 1.0

    def __repr__(self):
        return f"Distribution1D({self.name!r})"

    @property
    def continuous_mass(self) -> float:
        return 1.0 - math.fsum(m for _, m in self.atoms)

    def pdf(self, x: float) -> float:
        if self._pdf0 is None:
            return 0.0
        return self._pdf0(x / self.scale) / self.scale

    def cdf(self, x: float) -> float:
        return self._cdf0(x / self.scale)

    def sf(self, x: float) -> float:
        return self._sf0(x / self.scale)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return self.scale * np.asarray(self._sampler0(rng, size), dtype=float)

    def expect(self, g, tol: float = 1e-10, breakpoints=()) -> float:
        """E g(X): quadrature over the continuous part plus the atoms."""
        total = math.fsum(mass * g(loc) for loc, mass in self.atoms)
        if self._pdf0 is not None:
            lo, hi = self.support
            cuts = tuple(self.breakpoints) + tuple(breakpoints)
            total += integrate(lambda x: g(x) * self.pdf(x), lo, hi, tol, cuts, self.singular_at_lo)
        return total

    def mass_below(self, t: float, inclusive: bool = False) -> float:
        """P(X < t), or P(X <= t) when ``inclusive``."""
        p = self.cdf(t)
        if not inclusive:
            p -= math.fsum(m for loc, m in self.atoms if loc == t)
        return p


def uniform(a: float = 0.0, b: float = 1.0) -> Distribution1D:
    if not 0 <= a < b:
        raise ValueError("need 0 <= a < b")
    w = b - a
    return Distribution1D(
        f"uniform[{a:g},{b:g}]",
        pdf=lambda x: 1.0 / w if a <= x <= b else 0.0,
        cdf=lambda x: min(max((x - a) / w, 0.0), 1.0),
        sampler=lambda rng, size: rng.uniform(a, b, size),
        support=(a, b),
    )


def exponential() -> Distribution1D:
    return Distribution1D(
        "exponential",
        pdf=lambda x: math.exp(-x) if x >= 0 else 0.0,
        cdf=lambda x: -math.expm1(-x) if x > 0 else 0.0,
        sf=lambda x: math.exp(-x) if x > 0 else 1.0,
        sampler=lambda rng, size: rng.standard_exponential(size),
        support=(0.0, math.inf),
    )


def poly32() -> Distribution1D:
    """Density 3/4 x (2 - x) on [0, 2]."""
    def cdf(x):
        x = min(max(x, 0.0), 2.0)
        return 0.75 * (x * x - x ** 3 / 3)
    return Distribution1D(
        "poly32",
        pdf=lambda x: 0.75 * x * (2 - x) if 0 <= x <= 2 else 0.0,
        cdf=cdf,
        sampler=lambda rng, size: 2.0 * rng.beta(2.0, 2.0, size),
        support=(0.0, 2.0),
    )


def power_law(alpha: float) -> Distribution1D:
    """Density (1 - alpha) x^(-alpha) on (0, 1], unbounded at 0."""
    if not 0 < alpha < 0.75:
        raise ValueError("alpha must lie in (0, 0.75)")
    k = 1.0 - alpha
    return Distribution1D(
        f"power_law({alpha:g})",
        pdf=lambda x: k * x ** (-alpha) if 0 < x <= 1 else (math.inf if x == 0 else 0.0),
        cdf=lambda x: min(max(x, 0.0), 1.0) ** k,
        sampler=lambda rng, size: rng.beta(k, 1.0, size),
        support=(0.0, 1.0),
        singular_at_lo=True,
    )


def point_masses(locations, masses) -> Distribution1D:
    locs = np.asarray(locations, dtype=float)
    ps = np.asarray(masses, dtype=float)
    if locs.shape != ps.shape or locs.size == 0:
        raise ValueError("one mass per location is required")
    if (locs < 0).any() or (ps <= 0).any() or abs(math.fsum(ps) - 1) > 1e-12:
        raise ValueError("need nonnegative locations and positive masses summing to 1")
    order = np.argsort(locs)
    locs, ps = locs[order], ps[order]
    cum = np.cumsum(ps)

    def cdf(x):
        k = np.searchsorted(locs, x, side="right")
        return 0.0 if k == 0 else min(float(cum[k - 1]), 1.0)

    return Distribution1D(
        "atoms(" + ",".join(f"{p:g}@{v:g}" for v, p in zip(locs, ps)) + ")",
        cdf=cdf,
        sampler=lambda rng, size: rng.choice(locs, size=size, p=ps),
        support=(float(locs[0]), float(locs[-1])),
        atoms=tuple(zip(locs.tolist(), ps.tolist())),
    )


def with_atom_at_zero(base: Distribution1D, p0: float) -> Distribution1D:
    """Mixture: 0 with probability p0, otherwise a draw from ``base``."""
    if not 0 < p0 < 1:
        raise ValueError("p0 must lie in (0, 1)")
    q = 1.0 - p0
    lo, hi = base.support

    def sampler(rng, size):
        x = base.sample(rng, size)
        return np.where(rng.random(size) < p0, 0.0, x)

    pdf = None
    if base._pdf0 is not None:
        def pdf(x):
            return q * base.pdf(x)
    return Distribution1D(
        f"{p0:g}@0+{base.name}",
        pdf=pdf,
        cdf=lambda x: 0.0 if x < 0 else p0 + q * base.cdf(x),
        sampler=sampler,
        support=(0.0, hi),
        atoms=((0.0, p0),) + tuple((loc, q * m) for loc, m in base.atoms),
        breakpoints=(lo,) + base.breakpoints,
        singular_at_lo=base.singular_at_lo and lo == 0,
    )
