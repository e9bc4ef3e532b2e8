"""Ex-post comparisons between rules on a dense probe set."""

from fairshare import BOTTOM_HEAVY, EQUAL_SPLIT, PROPORTIONAL, ProbePlan, RuleId, dominates

plan = ProbePlan(random=5000)
pairs = [
    ("BH vs PRO, bad, n=3", BOTTOM_HEAVY, PROPORTIONAL, "bad", 3),
    ("BH vs ES, bad, n=4", BOTTOM_HEAVY, EQUAL_SPLIT, "bad", 4),
    ("TH(1) vs TH(1/2), good, n=2", RuleId.top_heavy(1), RuleId.top_heavy(0.5), "good", 2),
    ("TH(1/2) vs TH(1), good, n=3", RuleId.top_heavy(0.5), RuleId.top_heavy(1), "good", 3),
    ("TH(3/4) vs PRO, good, n=4", RuleId.top_heavy(0.75), PROPORTIONAL, "good", 4),
]
for name, a, b, kind, n in pairs:
    res = dominates(a, b, kind, n, plan)
    line = f"{name:30s} {res.verdict.value:12s} over {res.n_probes} probes"
    if res.witness_a is not None:
        line += f"; first rule better at {res.witness_a.round(3)}"
    if res.witness_b is not None:
        line += f"; second better at {res.witness_b.round(3)}"
    print(line)
