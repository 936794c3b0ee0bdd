import random
import sys

import pytest

from matsemi.scalar import field


@pytest.fixture
def K():
    return field(12)


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in acc.RESULTS.items():
        terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'} ({detail})")
