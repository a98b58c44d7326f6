import cmath

import pytest

ACCEPTANCE_LINES = []


def unit(k, M):
    return cmath.exp(2j * cmath.pi * k / M)


@pytest.fixture
def record_criterion():
    """Collects one summary line per acceptance criterion."""
    def record(number, ok, detail):
        ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
