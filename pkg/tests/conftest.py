from fractions import Fraction
import sys

import pytest
from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def rationals(num: int = 6, den: int = 4):
    return st.builds(lambda p, q: mpq(p, q), st.integers(-num, num), st.integers(1, den))


def rational_vectors(d: int, nonzero: bool = True):
    s = st.tuples(*[rationals() for _ in range(d)])
    return s.filter(any) if nonzero else s


def as_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


@pytest.fixture
def cube2():
    from symtensor.harness.corpus import builtin_ball

    return builtin_ball("inf", 2)


@pytest.fixture
def cross2():
    from symtensor.harness.corpus import builtin_ball

    return builtin_ball("1", 2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for text in lines:
            terminalreporter.write_line(text)
