import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "fairshare" / "fixtures"


@pytest.fixture
def example1():
    from fairshare import DiscreteProblem
    return DiscreteProblem.from_states(
        "bad", [(0.25, (1, 5)), (0.25, (5, 3)), (0.5, (5, 4))], labels=("a", "b")
    )


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def random_problem(rng, kind, n=None, states=None):
    """Random valid problem; some values are zero, every mean is positive."""
    from fairshare import DiscreteProblem
    n = n or int(rng.integers(2, 7))
    k = states or int(rng.integers(1, 21))
    probs = rng.dirichlet(np.ones(k))
    probs = probs / probs.sum()
    values = rng.exponential(size=(k, n)) * (rng.random((k, n)) > 0.15)
    values[0] = np.where(values[0] == 0, 1.0, values[0])
    if rng.random() < 0.3:
        values = np.round(values, 1)
        values[0] = np.where(values[0] == 0, 1.0, values[0])
    fix = probs.sum()
    probs[-1] += 1 - fix
    return DiscreteProblem(kind, probs, values)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
