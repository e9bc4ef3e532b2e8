"""Fair division of a single random good or bad.

A rule sees only the profile of normalized values (each agent's value
divided by its expectation) and returns a lottery over agents.  The library
implements the classical rules, the Top-Heavy and Bottom-Heavy families,
Fair Share accounting, the LP-optimal fair prior-dependent rule, worst-case
ratios and i.i.d. asymptotics.
"""

from .core import (
    DiscreteProblem,
    ObjectKind,
    OrderStats,
    as_profile,
    normalize_problem,
    order_stats,
    validate_problem,
)
from .errors import *  # noqa: F401,F403
from .fairness import (
    DominationResult,
    DominationVerdict,
    ProbePlan,
    WelfareReport,
    absolute_expected_values,
    agent_expected_values,
    dominates,
    fair_share_bound,
    social_value,
    verify_fair_share,
)
from .opt import (
    LinearProgram,
    LPSolution,
    StatewiseRule,
    build_fair_lp,
    opt_ratio,
    optimal_fair_rule,
    pi_ratio,
    simplex_solve,
    unconstrained_optimum,
)
from .rules import (
    BOTTOM_HEAVY,
    EQUAL_SPLIT,
    PROPORTIONAL,
    UTILITARIAN,
    RuleId,
    RuleName,
    allocate,
    allocate_batch,
    bottom_heavy,
    bottom_heavy_theta,
    equal_split,
    proportional,
    top_heavy,
    total_value_batch,
    utilitarian,
)
from .worstcase import (
    Method,
    RatioReport,
    cr_bounds_bottom_heavy,
    cr_closed_form_proportional,
    cr_closed_form_top_heavy,
    cr_search,
    hard_instance_bad,
    hard_instance_good,
    inf_pof,
    symmetric_problem,
)

__version__ = "0.1.0"
