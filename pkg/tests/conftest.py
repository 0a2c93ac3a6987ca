from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

from verma_pde.algebra import Series


def mono(**exps):
    """mono(x21=3, x32=Fraction(1, 2)) -> Series with that single monomial."""
    out = {}
    for name, e in exps.items():
        digits = name[1:]
        i, j = (int(digits[0]), int(digits[1])) if len(digits) == 2 else map(int, digits.split("_"))
        out[(i, j)] = e
    return Series.monomial(out)


@pytest.fixture
def F():
    return Fraction


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
