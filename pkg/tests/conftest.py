import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lgwindows.fixtures import conifold_xy, flop, orbifold  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20240611, help="seed for randomized tests")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture(scope="session")
def flop0():
    return flop()


@pytest.fixture(scope="session")
def flopW():
    return flop(True)


@pytest.fixture(scope="session")
def conifold():
    return conifold_xy()


@pytest.fixture(scope="session")
def orb2():
    return orbifold(2)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""
    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
