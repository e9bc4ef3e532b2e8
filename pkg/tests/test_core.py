import numpy as np
import pytest
from hypothesis import given, strategies as st

from fairshare import (
    DiscreteProblem,
    InvalidProblem,
    NegativeValue,
    ObjectKind,
    ProbabilitiesDoNotSumToOne,
    ZeroExpectedValue,
    as_profile,
    normalize_problem,
    order_stats,
    validate_problem,
)
from conftest import random_problem


def test_example1_is_valid(example1):
    assert validate_problem(example1) is example1
    assert example1.n == 2 and example1.n_states == 3
    assert list(example1.means()) == [4.0, 4.0]


def test_degenerate_prior_is_valid():
    p = DiscreteProblem.from_states("good", [(1.0, (1, 1))])
    assert validate_problem(p) is p


def test_zero_expected_value_names_the_agent():
    p = DiscreteProblem.from_states("bad", [(0.5, (1, 0)), (0.5, (2, 0))])
    with pytest.raises(ZeroExpectedValue) as info:
        validate_problem(p)
    assert info.value.agent == 1


def test_negative_value_rejected():
    p = DiscreteProblem.from_states("good", [(1.0, (1, -1))])
    with pytest.raises(NegativeValue):
        validate_problem(p)


def test_probabilities_must_sum_to_one():
    p = DiscreteProblem.from_states("good", [(0.5, (1, 1)), (0.4, (1, 2))])
    with pytest.raises(ProbabilitiesDoNotSumToOne):
        validate_problem(p)


def test_probability_tolerance_is_tight():
    ok = DiscreteProblem.from_states("good", [(0.5, (1, 1)), (0.5 + 1e-13, (1, 2))])
    validate_problem(ok)
    bad = DiscreteProblem.from_states("good", [(0.5, (1, 1)), (0.5 + 1e-11, (1, 2))])
    with pytest.raises(ProbabilitiesDoNotSumToOne):
        validate_problem(bad)


@pytest.mark.parametrize("states", [[], [(1.0, (1,))], [(0.5, (1, 2)), (0.5, (1, 2, 3))]])
def test_shape_errors(states):
    with pytest.raises(InvalidProblem):
        DiscreteProblem.from_states("good", states)


def test_normalize_example1(example1):
    q = normalize_problem(example1)
    np.testing.assert_array_equal(q.values, [[0.25, 1.25], [1.25, 0.75], [1.25, 1.0]])
    np.testing.assert_array_equal(q.probs, example1.probs)
    assert q.labels == ("a", "b")


def test_normalize_degenerate_prior_gives_ones():
    q = normalize_problem(DiscreteProblem.from_states("good", [(1.0, (3, 7))]))
    np.testing.assert_array_equal(q.values, [[1.0, 1.0]])


def test_normalize_already_normalized_is_identity(example1):
    q = normalize_problem(example1)
    assert normalize_problem(q) == q


def test_problem_equality_and_immutability(example1):
    twin = DiscreteProblem.from_states("bad", [(0.25, (1, 5)), (0.25, (5, 3)), (0.5, (5, 4))], ("a", "b"))
    assert twin == example1
    assert twin != normalize_problem(example1)
    with pytest.raises(ValueError):
        example1.values[0, 0] = 3.0


@pytest.mark.parametrize("seed", range(30))
def test_normalize_is_idempotent(seed):
    rng = np.random.default_rng(seed)
    p = random_problem(rng, ObjectKind.GOOD)
    q = normalize_problem(p)
    np.testing.assert_allclose(q.means(), 1.0, atol=1e-12)
    r = normalize_problem(q)
    np.testing.assert_allclose(r.values, q.values, rtol=1e-12)


def test_order_stats_distinct():
    s = order_stats([5, 3, 4])
    np.testing.assert_array_equal(s.sorted, [3, 4, 5])
    assert s.top_set == (0,)
    assert list(s.perm) == [1, 2, 0]


def test_order_stats_all_tied():
    s = order_stats([2, 2, 2])
    assert s.top_set == (0, 1, 2)
    assert s.level_sets == ((0, 1, 2),)


def test_order_stats_partial_tie():
    s = order_stats([1, 2, 2])
    assert s.level_of_rank(1) == (0,)
    assert s.level_of_rank(2) == s.level_of_rank(3) == (1, 2)
    assert s.top_set == (1, 2)


def test_profile_guards():
    with pytest.raises(NegativeValue):
        as_profile([1, -0.5])
    with pytest.raises(InvalidProblem):
        as_profile([1.0])


profiles = st.lists(st.sampled_from([0.0, 0.5, 1.0, 2.0, 3.0]) | st.floats(0, 100), min_size=2, max_size=12)


@given(profiles, st.randoms(use_true_random=False))
def test_order_stats_properties(x, rnd):
    s = order_stats(x)
    assert np.all(np.diff(s.sorted) >= 0)
    assert sorted(s.perm.tolist()) == list(range(len(x)))
    assert sum(len(g) for g in s.level_sets) == len(x)
    assert s.top_set == s.level_of_rank(len(x))
    perm = list(range(len(x)))
    rnd.shuffle(perm)
    np.testing.assert_array_equal(order_stats([x[i] for i in perm]).sorted, s.sorted)


def test_kind_parsing():
    assert ObjectKind("good") is ObjectKind.GOOD
    with pytest.raises(ValueError):
        ObjectKind("neutral")
