from fractions import Fraction
from random import Random

import pytest


def random_rational(rng: Random, bits: int = 64, nonzero: bool = True) -> Fraction:
    """A random rational with numerator and denominator up to 2**bits."""
    while True:
        num = rng.getrandbits(rng.randint(1, bits))
        den = rng.getrandbits(rng.randint(1, bits)) or 1
        if rng.random() < 0.5:
            num = -num
        value = Fraction(num, den)
        if value != 0 or not nonzero:
            return value


@pytest.fixture
def rng() -> Random:
    return Random(20240817)
