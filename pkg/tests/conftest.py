import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vinolab import build_factor_sieve  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def small_sieve():
    return build_factor_sieve(20_000)


@pytest.fixture(scope="session")
def sieve_1m():
    return build_factor_sieve(1_000_200)


@pytest.fixture(scope="session")
def sieve_10m():
    return build_factor_sieve(10_000_000)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
