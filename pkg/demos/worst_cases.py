"""How bad can a fair rule be on its worst profile?

Compares the numeric search with the closed forms.  For Top-Heavy with
theta = 1 the printed formula assumes every non-top agent values the good;
letting some agents value it at zero gives a larger ratio once n >= 4.
"""

from fairshare import (
    BOTTOM_HEAVY,
    PROPORTIONAL,
    RuleId,
    cr_bounds_bottom_heavy,
    cr_closed_form_proportional,
    cr_closed_form_top_heavy,
    cr_search,
)
from fairshare.worstcase import cr_top_heavy_zero_aware

print("n  TH(1) search  formula   zero-aware (k)   PRO search  (sqrt(n)+1)/2")
for n in range(2, 7):
    s = cr_search(RuleId.top_heavy(1), n, "good", restarts=300)
    z, k = cr_top_heavy_zero_aware(n, 1)
    pro = cr_search(PROPORTIONAL, n, "good", restarts=300)
    print(f"{n}  {s.value:.6f}      {cr_closed_form_top_heavy(n, 1):.6f}  {z:.6f} ({k})     "
          f"{pro.value:.6f}    {cr_closed_form_proportional(n, 'good'):.6f}")

print("\nworst profile found for TH(1), n = 5:", cr_search(RuleId.top_heavy(1), 5, "good", restarts=300).witness.round(4))

print("\nBottom-Heavy on a bad stays between its two bounds")
for n in (2, 4, 6, 8):
    s = cr_search(BOTTOM_HEAVY, n, "bad", restarts=200)
    lo, hi = cr_bounds_bottom_heavy(n)
    print(f"  n={n}: {lo:.5f} <= {s.value:.5f} <= {hi:.5f}")
