import numpy as np
import pytest

from psicoord.psi import Metric
from psicoord.triangulation import GluingSpec, build_complex, ring_complex, two_hexagon_complex

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def theta_complex():
    return two_hexagon_complex()


@pytest.fixture(scope="session")
def ring4():
    return ring_complex(4)


@pytest.fixture(scope="session")
def ring6():
    return ring_complex(6)


@pytest.fixture(scope="session")
def self_glued_complex():
    # edges 0 and 2 are self-glued; only edge 1 joins the two hexagons
    return build_complex(GluingSpec(2, (((0, 0), (0, 1)), ((0, 2), (1, 0)), ((1, 1), (1, 2)))))


def random_metric(rng, edge_count, low=0.2, high=5.0):
    """Log-uniform lengths in [low, high]."""
    return Metric(tuple(np.exp(rng.uniform(np.log(low), np.log(high), edge_count))))


@pytest.fixture
def acceptance_log():
    def record(criterion, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
