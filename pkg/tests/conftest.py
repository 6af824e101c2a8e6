import pytest
from hypothesis import settings

from slicepressure.arith import coprime_slopes, make_slope

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_SLOPES = coprime_slopes(5)


@pytest.fixture
def half():
    return make_slope(1, 2)


@pytest.fixture
def diagonal():
    return make_slope(1, 1)


def pytest_terminal_summary(terminalreporter):
    # acceptance verdicts collected by test_acceptance.py
    from tests_acceptance_registry import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for num in sorted(LINES):
            terminalreporter.write_line(LINES[num])
