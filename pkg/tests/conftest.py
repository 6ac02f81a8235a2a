import pytest

from goldbach_lab.primes import build_prime_table
from goldbach_lab.table import build_table_convolution, build_table_direct

ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {criterion:<44} {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def primes_small():
    return build_prime_table(20_000)


@pytest.fixture(scope="session")
def table5():
    return build_table_direct(5)


@pytest.fixture(scope="session")
def table100():
    return build_table_direct(100)


@pytest.fixture(scope="session")
def table_1e4():
    return build_table_convolution(10_000)
