import sys

import numpy as np
import pytest

from amccr.core import ProblemInstance


def random_ratios(rng, k, lo=1.0, hi=100.0):
    return rng.uniform(lo, hi, size=k).tolist()


def random_bounds(rng, k):
    m = rng.uniform(0.1, 10.0, size=k)
    M = m * rng.uniform(1.0, 50.0, size=k)
    return ProblemInstance.from_bounds(m.tolist(), M.tolist())


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
