"""Efficiency when values are i.i.d. across many agents.

Each line puts a Monte Carlo estimate at n = 200 next to the leading-order
formula at the same n and at n = infinity.  The exponential case shows how
slowly the formula approaches its limit when the support is unbounded.
"""

import math

from fairshare import BOTTOM_HEAVY, PROPORTIONAL, RuleId
from fairshare.asymptotics import (
    exponential,
    monte_carlo_pi,
    pi_bh_limit_bad,
    pi_pro_limit_bad,
    pi_th_limit_good,
    uniform,
)

n, samples = 200, 200_000
cases = [
    ("TH(1), good, uniform[0,2]", uniform(0, 2), RuleId.top_heavy(1), "good", pi_th_limit_good),
    ("TH(1), good, exponential", exponential(), RuleId.top_heavy(1), "good", pi_th_limit_good),
    ("BH, bad, uniform[1/2,3/2]", uniform(0.5, 1.5), BOTTOM_HEAVY, "bad", lambda d, n: pi_bh_limit_bad(d, n)),
    ("PRO, bad, uniform[1/2,3/2]", uniform(0.5, 1.5), PROPORTIONAL, "bad", lambda d, n: pi_pro_limit_bad(d, n)),
]
for name, d, rule, kind, formula in cases:
    est = monte_carlo_pi(d, rule, kind, n, samples, seed=7, workers=4)
    at_n = formula(d, n) if kind == "bad" else formula(d, 1, n)
    limit = formula(d, math.inf) if kind == "bad" else formula(d, 1, math.inf)
    print(f"{name:28s} MC {est.mean:.4f} +- {est.std_error:.4f}   formula(n) {at_n:.4f}   limit {limit:.4f}")

print("\nexponential: formula at growing n")
for k in (2, 3, 4, 6, 9):
    print(f"  n=1e{k}: {pi_th_limit_good(exponential(), 1, 10 ** k):.4f}")
