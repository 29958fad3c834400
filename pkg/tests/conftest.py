import sys

import pytest

from crossnnm.grid import build_grid


@pytest.fixture(scope="session")
def grid20():
    return build_grid(20)


@pytest.fixture(scope="session")
def grid40():
    return build_grid(40)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
