"""Adaptive Simpson quadrature and the exponential integral."""

from __future__ import annotations

import math

from ..errors import DomainError, QuadratureNonConvergence

MAX_DEPTH = 60
EULER_GAMMA = 0.5772156649015329


def _safe(f, x, inward):
    try:
        y = f(x)
    except (ZeroDivisionError, ValueError, OverflowError):
        y = math.nan
    if math.isfinite(y):
        return y
    # integrable endpoint singularities and 0/0 forms: step just inside
    y = f(x + inward)
    if not math.isfinite(y):
        raise QuadratureNonConvergence(f"integrand is not finite near {x!r}")
    return y


def _simpson(f, a, fa, m, fm, b, fb, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6 * (fa + 4 * flm + fm)
    right = (b - m) / 6 * (fm + 4 * frm + fb)
    delta = left + right - whole
    if not math.isfinite(delta):
        raise QuadratureNonConvergence("integrand is not finite inside the interval")
    if abs(delta) <= 15 * max(tol, 1e-15 * abs(left + right)):
        return left + right + delta / 15
    if depth <= 0:
        raise QuadratureNonConvergence("recursion limit reached")
    return (_simpson(f, a, fa, lm, flm, m, fm, left, tol / 2, depth - 1)
            + _simpson(f, m, fm, rm, frm, b, fb, right, tol / 2, depth - 1))


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-8, max_depth: int = MAX_DEPTH,
                     panels: int = 8) -> float:
    """Integrate ``f`` over a finite [a, b].

    The range is first cut into ``panels`` equal pieces so that narrow
    features are not missed by the very first Simpson estimate.
    """
    if a == b:
        return 0.0
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("adaptive_simpson needs finite limits")
    h = (b - a) / panels
    inward = (b - a) * 1e-13
    total = 0.0
    for k in range(panels):
        lo = a + k * h
        hi = b if k == panels - 1 else a + (k + 1) * h
        flo = _safe(f, lo, inward) if k == 0 else f(lo)
        fhi = _safe(f, hi, -inward) if k == panels - 1 else f(hi)
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        whole = (hi - lo) / 6 * (flo + 4 * fmid + fhi)
        total += _simpson(f, lo, flo, mid, fmid, hi, fhi, whole, tol / panels, max_depth)
    return total


def integrate(f, a: float, b: float, tol: float = 1e-8, breakpoints=(), left_singular: bool = False) -> float:
    """Integrate over [a, b] with b possibly infinite.

    An infinite upper limit is mapped to [0, 1] by t = a + u/(1-u).
    ``breakpoints`` (kinks, jumps) split the range.  ``left_singular``
    substitutes x = a + (c-a) s^4 on the first piece, which tames densities
    like x^(-alpha) for alpha < 3/4.
    """
    if b < a:
        return -integrate(f, b, a, tol, breakpoints, left_singular)
    if math.isinf(b):
        def g(u):
            if u >= 1.0:
                return 0.0
            t = a + u / (1.0 - u)
            return f(t) / (1.0 - u) ** 2
        mapped = [(c - a) / (1.0 + c - a) for c in breakpoints if a < c < math.inf]
        return integrate(g, 0.0, 1.0, tol, mapped, left_singular)
    cuts = [a] + sorted(c for c in set(breakpoints) if a < c < b) + [b]
    pieces = list(zip(cuts[:-1], cuts[1:]))
    total = 0.0
    for k, (lo, hi) in enumerate(pieces):
        piece_tol = tol / len(pieces)
        if k == 0 and left_singular:
            w = hi - lo

            def g(s, lo=lo, w=w):
                return f(lo + w * s ** 4) * 4 * w * s ** 3
            total += adaptive_simpson(g, 0.0, 1.0, piece_tol)
        else:
            total += adaptive_simpson(f, lo, hi, piece_tol)
    return total


def exp_integral_Ei(x: float) -> float:
    """Ei(x) = -E1(-x) for x < 0."""
    x = float(x)
    if not x < 0:
        raise DomainError("Ei is implemented for negative arguments only")
    if x >= -1.0:
        term = 1.0
        total = 0.0
        k = 1
        while True:
            term *= x / k
            add = term / k
            total += add
            if abs(add) < 1e-17 * max(1.0, abs(total)):
                break
            k += 1
        return EULER_GAMMA + math.log(-x) + total
    # modified Lentz on the continued fraction for E1(z), z = -x > 1
    z = -x
    tiny = 1e-300
    b = z + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        step = c * d
        h *= step
        if abs(step - 1.0) < 1e-16:
            break
    return -h * math.exp(-z)
