import pytest

from repeaterplan import NetworkPlanner


@pytest.fixture(scope="session")
def planner_1000():
    return NetworkPlanner(users=1000, area_radius=40, coverage_cap=5).fit()


@pytest.fixture(scope="session")
def plan_1000(planner_1000):
    return planner_1000.plan_


@pytest.fixture(scope="session")
def plan_10000():
    return NetworkPlanner(users=10000, area_radius=40, coverage_cap=2).fit().plan_


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
