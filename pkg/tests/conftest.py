import sys

import pytest

from helpers import Bundle


@pytest.fixture(scope="session")
def table1():
    return Bundle("table1")


@pytest.fixture(scope="session")
def envisat_p1():
    return Bundle("envisat_p1")


@pytest.fixture(scope="session")
def envisat_p2():
    return Bundle("envisat_p2")


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
