import pytest

from franson_swap.experiments import Setup, oracle_setup

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_setup():
    # Δω = 1 (τ = 1), Δt = 30, 2^14 grid points
    return Setup(omega=40.0, bandwidth=1.0, t_short=5.0, t_long=35.0,
                 delta_small_t=30.0, grid_points=2**14, time_step=0.25)


@pytest.fixture(scope="session")
def acceptance_pair(acceptance_setup):
    return acceptance_setup.pair()


@pytest.fixture(scope="session")
def small_setup():
    return oracle_setup()


@pytest.fixture(scope="session")
def small_pair(small_setup):
    return small_setup.pair()


@pytest.fixture
def report():
    def _report(criterion, ok, detail):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  [{criterion}] {detail}")
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
