import sys

import pytest

from oracles import GOLDEN_BETA
from skewtent import SkewTentMap


@pytest.fixture(scope="session")
def golden():
    return SkewTentMap(0.5, GOLDEN_BETA)


@pytest.fixture(scope="session")
def full_tent():
    return SkewTentMap(0.5, 1.0)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[key])
