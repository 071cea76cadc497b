import numpy as np
import pytest

from qccd import copula
from qccd.marginals import pseudo_observations


@pytest.fixture(scope="session")
def independent_model():
    rng = np.random.default_rng(12345)
    x, y = rng.uniform(size=(2, 5000))
    return copula.fit(pseudo_observations(x), pseudo_observations(y))


@pytest.fixture(scope="session")
def dependent_pseudo():
    rng = np.random.default_rng(7)
    x = rng.normal(size=800)
    y = np.sin(2 * x) + 0.3 * rng.normal(size=800)
    return pseudo_observations(x), pseudo_observations(y)


@pytest.fixture(scope="session")
def dependent_model(dependent_pseudo):
    return copula.fit(*dependent_pseudo)


@pytest.fixture(scope="session")
def comonotone_model():
    u = np.arange(1, 501) / 501.0
    return copula.fit(u, u.copy())


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    def skip(label, reason):
        ACCEPTANCE_LINES.append(f"SKIP  {label}  {reason}")
        pytest.skip(reason)

    record.skip = skip
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
