import numpy as np
import pytest

from pumls.experiments import franke
from pumls.pointsets import uniform_grid, unit_box


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def franke_l4():
    return uniform_grid(4).with_values(franke)


@pytest.fixture(scope="session")
def box2():
    return unit_box(2)


def normal_equation_fit(E, w, f):
    """Independent oracle: solve (E^T D E) c = E^T D f directly."""
    E = np.asarray(E, dtype=float)
    D = np.diag(np.asarray(w, dtype=float))
    return np.linalg.solve(E.T @ D @ E, E.T @ D @ np.asarray(f, dtype=float))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.REPORT:
        terminalreporter.write_line(line)
