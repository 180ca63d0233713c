from __future__ import annotations

from fractions import Fraction

import pytest

from uqbethe.scalars import ScalarContext

# filled by test_acceptance; printed at the end of the session
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def ctx() -> ScalarContext:
    return ScalarContext(Fraction(3, 7), 1)


@pytest.fixture
def ctx2() -> ScalarContext:
    """q = 2, the value used by the hand-computed examples."""
    return ScalarContext(Fraction(2), 1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
