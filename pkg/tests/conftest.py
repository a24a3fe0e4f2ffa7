import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from biquad_sos.scalar import Scalar

ACCEPTANCE_LINES: list[str] = []

RADICANDS = [1, 2, 3, 5, 6, 7]

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.dictionaries(st.sampled_from(RADICANDS), rationals, max_size=4).map(Scalar)


@pytest.fixture
def rng():
    return random.Random(20261016)


def random_scalar(r: random.Random, radicands=RADICANDS) -> Scalar:
    return Scalar({d: Fraction(r.randint(-9, 9), r.randint(1, 6)) for d in r.sample(radicands, r.randint(1, 3))})


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
