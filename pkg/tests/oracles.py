"""Independent reference implementations used only by the tests.

They follow the rule definitions literally in exact rational arithmetic,
without sharing any code with the library.
"""

from fractions import Fraction as Fr


def _fr(x):
    return [Fr(v) for v in x]


def th_exact(x, theta):
    x = _fr(x)
    theta = Fr(theta)
    n = len(x)
    top = max(x)
    if all(v == top for v in x):
        return [Fr(1, n)] * n
    xbar = sum(x) / n
    out = []
    for v in x:
        if v == top:
            out.append(None)
        elif v == 0:
            out.append(Fr(0))
        else:
            out.append(max(Fr(1, n) + theta / (n - 1) * (1 - xbar / v), Fr(0)))
    k = sum(1 for v in out if v is None)
    rest = (1 - sum(v for v in out if v is not None)) / k
    return [rest if v is None else v for v in out]


def bh_exact(x, theta=1):
    """Prefix construction over the order statistics, literally."""
    x = _fr(x)
    theta = Fr(theta)
    n = len(x)
    if theta == 0 or all(v == x[0] for v in x):
        return [Fr(1, n)] * n
    xbar = sum(x) / n

    def bound(v):
        return None if v == 0 else Fr(1, n) + theta / (n - 1) * (xbar / v - 1)

    xs = sorted(x)
    # t_tilde: largest t with x(t) < x(t+1) (or t = n) whose prefix sum <= 1
    t_tilde = 0
    for t in range(1, n + 1):
        if t < n and xs[t] == xs[t - 1]:
            continue
        bs = [bound(v) for v in xs[:t]]
        if any(b is None for b in bs) or sum(bs) > 1:
            continue
        t_tilde = t
    cut = xs[t_tilde - 1] if t_tilde else None
    out = [Fr(0)] * n
    used = Fr(0)
    for i, v in enumerate(x):
        if cut is not None and v <= cut:
            out[i] = bound(v)
            used += out[i]
    if t_tilde < n:
        nxt = xs[t_tilde]
        group = [i for i, v in enumerate(x) if v == nxt]
        for i in group:
            out[i] = (1 - used) / len(group)
    return out


def pro_exact(x, good):
    x = _fr(x)
    n = len(x)
    if good:
        s = sum(x)
        return [Fr(1, n)] * n if s == 0 else [v / s for v in x]
    zeros = [i for i, v in enumerate(x) if v == 0]
    if zeros:
        return [Fr(1, len(zeros)) if v == 0 else Fr(0) for v in x]
    inv = [1 / v for v in x]
    s = sum(inv)
    return [v / s for v in inv]


def th_two_agent(x1, x2):
    """Two-agent Top-Heavy(1) closed form, for x1 <= x2 mirrored otherwise."""
    if x1 > x2:
        a, b = th_two_agent(x2, x1)
        return b, a
    if x1 == x2:
        return 0.5, 0.5
    t = x1 / x2
    if t <= 0.5:
        return 0.0, 1.0
    return 1 - x2 / (2 * x1), x2 / (2 * x1)


def bh_two_agent(x1, x2):
    if x1 > x2:
        a, b = bh_two_agent(x2, x1)
        return b, a
    if x1 == x2:
        return 0.5, 0.5
    if x1 / x2 <= 0.5:
        return 1.0, 0.0
    return x2 / (2 * x1), 1 - x2 / (2 * x1)
