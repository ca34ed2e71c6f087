import pytest

from fuzzyswitch.dsl import builtin_rulebase
from fuzzyswitch.engine import default_variables
from fuzzyswitch.traceio import load_scenario

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def rb():
    return builtin_rulebase()


@pytest.fixture(scope="session")
def variables():
    (gu, gt, nt), score = default_variables()
    return {"GU": gu, "GT": gt, "NT": nt, "Score": score}


@pytest.fixture(scope="session")
def default_scenario():
    return load_scenario()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
