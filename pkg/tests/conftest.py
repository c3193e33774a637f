import numpy as np
import pytest

from qsample.markov import IsingLadder, build_glauber_chain, random_reversible_chain


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def small_chains():
    """A mix of random reversible chains and lazy Glauber ladders, n <= 16."""
    g = np.random.default_rng(99)
    chains = [random_reversible_chain(n, g) for n in (2, 3, 5, 8)]
    chains.append(random_reversible_chain(7, g, density=0.4))
    chains.append(build_glauber_chain(IsingLadder(2), 0.6))
    chains.append(build_glauber_chain(IsingLadder(1), 1.0, lazy=False))
    return chains


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(mod.verdict_line(k))
