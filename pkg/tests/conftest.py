import numpy as np
import pytest


def multivariate_t(rng, n, p, df, scatter=None, loc=None):
    """Reference multivariate-t sampler via scipy, independent of cpdr.simulation."""
    from scipy import stats

    scatter = np.eye(p) if scatter is None else scatter
    loc = np.zeros(p) if loc is None else loc
    return stats.multivariate_t(loc=loc, shape=scatter, df=df).rvs(size=n, random_state=rng)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def record(criterion, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
