import pytest

from cdtrade.prob import set_units

# Filled by test_acceptance; printed after the run.
ACCEPTANCE_LINES = []


@pytest.fixture(autouse=True)
def _bits():
    set_units("bits")
    yield
    set_units("bits")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
