import cmath
import math

import pytest

# lines recorded by the acceptance module, echoed in the terminal summary
ACCEPTANCE_LINES = []


def fock_sum_overlap(a, b, n_max=40):
    """<b|a> as a truncated Fock sum with plain factorials."""
    norm = math.exp(-0.5 * abs(a) ** 2 - 0.5 * abs(b) ** 2)
    return norm * sum((b.conjugate() * a) ** n / math.factorial(n) for n in range(n_max + 1))


@pytest.fixture
def fock_overlap():
    return fock_sum_overlap


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def polar(r, phi):
    return cmath.rect(r, phi)
