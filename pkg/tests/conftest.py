"""Shared strategies and instance generators."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from subeq_lab.cyclofield import CycloNumber
from subeq_lab.laurent import OdeInstance

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

RESIDUES = (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(-1))

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
cyclo_numbers = st.builds(CycloNumber, small_fractions, small_fractions)
nonzero_cyclo = cyclo_numbers.filter(lambda x: not x.is_zero())


def rand_rational(rng: random.Random, num: int = 9, den: int = 5, nonzero: bool = False) -> Fraction:
    while True:
        x = Fraction(rng.randint(-num, num), rng.randint(1, den))
        if x or not nonzero:
            return x


def random_instance(rng: random.Random) -> OdeInstance:
    coeffs = {k: rand_rational(rng) for k in ("c1", "c2", "c4", "c5", "c6", "c7")}
    return OdeInstance(rng.choice(RESIDUES), **coeffs)


@pytest.fixture
def rng():
    return random.Random(20261017)


# -- acceptance summary lines ---------------------------------------------------
ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} ({detail})"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
