"""Two agents share the cost of a facility placed in one of three towns.

Walks through the classical rules, the Bottom-Heavy rule and the best fair
rule that knows the prior, on the same small problem.
"""

import numpy as np

from fairshare import (
    BOTTOM_HEAVY,
    PROPORTIONAL,
    UTILITARIAN,
    DiscreteProblem,
    absolute_expected_values,
    opt_ratio,
    optimal_fair_rule,
    pi_ratio,
    verify_fair_share,
)

towns = ["A", "B", "C"]
p = DiscreteProblem.from_states(
    "bad",
    [(0.25, (1, 5)), (0.25, (5, 3)), (0.5, (5, 4))],
    labels=("a", "b"),
)
print("disutility of the bad in each town (agents a, b), both means are 4")
for t, q, row in zip(towns, p.probs, p.values):
    print(f"  {t}  p={q:<5g} {row}")

print("\nThe utilitarian rule gives the bad to whoever minds it least.")
cost = absolute_expected_values(p, UTILITARIAN)
rep = verify_fair_share(p, UTILITARIAN)
print(f"  expected costs {cost}, total {cost.sum():g}")
print(f"  agent b expects {cost[1]:g}, more than half of its mean 4: fair share ok = {rep.fs_ok.tolist()}")

for name, rule in (("proportional", PROPORTIONAL), ("bottom-heavy", BOTTOM_HEAVY)):
    cost = absolute_expected_values(p, rule)
    print(f"\n{name}: costs {np.round(cost, 4)}, total {cost.sum():.4f}")
    print(f"  vs the unconstrained optimum {pi_ratio(p, rule):.4f}, vs the best fair rule {opt_ratio(p, rule):.4f}")

rule, value = optimal_fair_rule(p)
print(f"\nbest fair rule (LP): total {4 * value:g}")
for t, row in zip(towns, rule.allocations):
    print(f"  {t}: shares {np.round(row, 4)}")
print(f"  agent costs {absolute_expected_values(p, rule)}; b sits exactly at its fair share")
