import pytest

from unicycle_formation.engine import run
from unicycle_formation.potential import PotentialParams
from unicycle_formation.scenario import load_scenario
from unicycle_formation.tracking import TrackingGains

# parameters of the shipped line-formation scenario
LINE_PARAMS = PotentialParams(K_ij=3.0, a=1.0, b=2.0, c=4.0)
LINE_GAINS = TrackingGains(K_theta=3.0, K=4.0, D_max=3.0)


@pytest.fixture
def params():
    return LINE_PARAMS


@pytest.fixture
def gains():
    return LINE_GAINS


@pytest.fixture(scope="session")
def line_scenario():
    return load_scenario("line_formation")


@pytest.fixture(scope="session")
def line_run(line_scenario):
    return run(line_scenario)


# one summary line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
