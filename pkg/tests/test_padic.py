"""Newton polygon and distance profile tests."""

from fractions import Fraction
from random import Random

import pytest

from orbitintegra.arith import padic_valuation
from orbitintegra.errors import DegenerateInputError, InputError
from orbitintegra.padic import (
    cluster_count,
    distance_profile,
    min_distance_bound,
    min_distance_scan,
    newton_polygon,
)
from orbitintegra.primes import primes_below

from conftest import random_rational
from quadratic_oracle import oracle_quadratic_profile


# --- tests -----------------------------------------------------------------


class TestNewtonPolygon:
    def test_single_segment(self):
        polygon = newton_polygon([-2, 0, 0, 0, 1], 2)
        assert polygon.segments == ((Fraction(1, 4), 4),)
        assert polygon.vertices == ((0, Fraction(1)), (4, Fraction(0)))

    def test_two_segments(self):
        polygon = newton_polygon([7, 6, 1], 7)
        assert polygon.segments == ((Fraction(1), 1), (Fraction(0), 1))

    def test_flat(self):
        polygon = newton_polygon([-1, 0, 1], 3)
        assert polygon.segments == ((Fraction(0), 2),)

    def test_rejects_zero_constant(self):
        with pytest.raises(InputError):
            newton_polygon([0, 1, 1], 5)

    def test_rejects_composite(self):
        with pytest.raises(InputError):
            newton_polygon([1, 1], 6)

    def test_slope_sum_identity(self, rng):
        for _ in range(300):
            p = rng.choice([2, 3, 5, 7, 11])
            degree = rng.randint(1, 8)
            coeffs = [random_rational(rng, 18) for _ in range(degree + 1)]
            for k in range(1, degree):
                if rng.random() < 0.3:
                    coeffs[k] = Fraction(0)
            if coeffs[0] == 0:
                coeffs[0] = Fraction(1)
            if coeffs[-1] == 0:
                coeffs[-1] = Fraction(1)
            polygon = newton_polygon(coeffs, p)
            total = sum((w * m for w, m in polygon.segments), Fraction(0))
            assert total == padic_valuation(coeffs[0], p) - padic_valuation(
                coeffs[-1], p
            )


class TestDistanceProfile:
    def test_examples(self):
        assert distance_profile(3, 2, 2, 7) == (Fraction(1), Fraction(0))
        assert distance_profile(1, 2, 2, 2) == (Fraction(0), Fraction(0))
        assert distance_profile(0, 2, 4, 2) == (Fraction(1, 4),) * 4

    def test_degenerate(self):
        with pytest.raises(DegenerateInputError):
            distance_profile(2, 4, 2, 5)

    def test_sum_matches_resultant(self, rng):
        for _ in range(150):
            alpha = random_rational(rng, 12)
            beta = random_rational(rng, 12)
            n = rng.choice([2, 3, 4, 5, 8, 16])
            p = rng.choice([2, 3, 5, 13])
            if alpha**n == beta:
                continue
            profile = distance_profile(alpha, beta, n, p)
            assert sum(profile) == padic_valuation(alpha**n - beta, p)

    def test_matches_literal_expansion(self, rng):
        # Cross-route check: expand (y + alpha)^n - beta coefficient by
        # coefficient and feed the literal polynomial to newton_polygon.
        from math import comb

        for _ in range(60):
            alpha = random_rational(rng, 10)
            beta = random_rational(rng, 10)
            n = rng.choice([2, 3, 4, 6, 9])
            p = rng.choice([2, 3, 5, 7])
            if alpha**n == beta:
                continue
            coeffs = [comb(n, k) * alpha ** (n - k) for k in range(n + 1)]
            coeffs[0] -= beta
            literal = newton_polygon(coeffs, p).root_valuations()
            assert literal == distance_profile(alpha, beta, n, p)

    def test_quadratic_oracle(self, rng):
        primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        done = 0
        while done < 200:
            alpha = random_rational(rng, 14)
            beta = random_rational(rng, 14)
            p = rng.choice(primes)
            if beta == 0 or alpha * alpha == beta:
                continue
            expected = oracle_quadratic_profile(alpha, beta, p)
            assert list(distance_profile(alpha, beta, 2, p)) == expected, (
                alpha,
                beta,
                p,
            )
            done += 1


class TestClusterCount:
    def test_examples(self):
        assert cluster_count((Fraction(1), Fraction(0)), Fraction(1, 6)) == 1
        assert cluster_count((Fraction(0), Fraction(0)), 0) == 0
        assert cluster_count((Fraction(1, 4),) * 4, Fraction(1, 8)) == 4

    def test_pairwise_bound_random(self, rng):
        # Exact clustering invariant: with the base-valuation adjusted
        # threshold, at most one preimage can sit that close to alpha.
        for _ in range(250):
            alpha = random_rational(rng, 12)
            beta = random_rational(rng, 12)
            n = rng.choice([2, 4, 8, 16, 32, 64])
            p = rng.choice([2, 3, 5, 7, 13, 97])
            if alpha**n == beta:
                continue
            profile = distance_profile(alpha, beta, n, p)
            threshold = Fraction(padic_valuation(beta, p), n) + Fraction(1, p - 1)
            assert cluster_count(profile, threshold) <= 1


class TestMinDistance:
    def test_example(self):
        scan = min_distance_scan(3, 2, 7, 4)
        assert scan.value == 1
        assert scan.stabilized_at == 1
        assert scan.confirmed
        assert min_distance_bound(3, 2, 7, 4) == 1

    def test_all_far(self):
        assert min_distance_bound(1, 2, 5, 3) == 0

    def test_unit_precondition(self):
        with pytest.raises(InputError):
            min_distance_scan(Fraction(1, 3), 2, 3, 3)
        with pytest.raises(InputError):
            min_distance_scan(14, 2, 7, 3)

    def test_degenerate_level(self):
        with pytest.raises(DegenerateInputError):
            min_distance_scan(2, 4, 3, 3)  # 2**2 = 4 at depth 1
