import math
from fractions import Fraction

import mpmath as mp
import pytest

from orbitintegra.arith import LogValue, Place, log_plus, weil_height
from orbitintegra.binomial import factor_binomial
from orbitintegra.errors import DegenerateInputError, InputError
from orbitintegra.gaussian import GaussianRational
from orbitintegra.localheights import (
    chordal_distance,
    class_height_sum,
    decay_envelope,
    dirichlet_quadrature,
    equidistribution_bound,
    equilibrium_integral,
    equilibrium_quadrature,
    level_height_sum,
    local_height,
    truncated_local_height,
    truncation_constants,
)
from orbitintegra.orbits import RadicalPoint

from conftest import random_rational

INF = Place.infinity()


class TestChordal:
    def test_integral_point_vs_infinity(self):
        # |gamma|_p <= 1 makes the chordal distance to infinity maximal.
        assert chordal_distance((Fraction(7), Fraction(1)), (Fraction(1), Fraction(0)), Place.finite(5)) == 1

    def test_identical_points(self):
        assert chordal_distance((Fraction(2), Fraction(1)), (Fraction(2), Fraction(1)), Place.finite(3)) == 0

    def test_finite_example(self):
        assert chordal_distance((Fraction(3), Fraction(1)), (Fraction(0), Fraction(1)), Place.finite(3)) == Fraction(1, 3)

    def test_range(self, rng):
        # Finite places stay in [0, 1] (ultrametric); the archimedean
        # sup-norm form is bounded by 2 instead.
        for _ in range(100):
            x = (random_rational(rng, 12), random_rational(rng, 12, nonzero=False))
            y = (random_rational(rng, 12), random_rational(rng, 12, nonzero=False))
            for v in (Place.finite(2), Place.finite(7)):
                assert 0 <= chordal_distance(x, y, v) <= 1
            assert 0 <= float(chordal_distance(x, y, INF, 96)) <= 2 + 1e-20

    def test_archimedean_symmetry(self):
        a = chordal_distance((Fraction(1), Fraction(2)), (Fraction(5), Fraction(3)), INF, 96)
        b = chordal_distance((Fraction(5), Fraction(3)), (Fraction(1), Fraction(2)), INF, 96)
        assert a == b

    def test_rejects_zero_point(self):
        with pytest.raises(InputError):
            chordal_distance((Fraction(0), Fraction(0)), (Fraction(1), Fraction(1)), Place.finite(3))


class TestLocalHeight:
    def test_archimedean_example(self):
        value = local_height(Fraction(2), Fraction(1), INF, 128)
        assert abs(value.value() - math.log(2)) < 1e-30

    def test_pole(self):
        with pytest.raises(DegenerateInputError):
            local_height(Fraction(2), Fraction(2), INF, 128)

    def test_radical_point_archimedean(self):
        # alpha = 2 against the point 2**(1/4) * i.
        pt = RadicalPoint(Fraction(2), 4, 1)
        value = local_height(Fraction(2), pt, INF, 128).value()
        with mp.workprec(128):
            z = mp.root(2, 4) * mp.mpc(0, 1)
            expected = mp.log(mp.root(2, 4)) + mp.log(2) - mp.log(abs(z - 2))
        assert abs(value - float(expected)) < 1e-25

    def test_finite_rational(self):
        value = local_height(Fraction(1, 3), Fraction(2), Place.finite(3))
        # log+|2|_3 = 0, log+|1/3|_3 = log 3, v_3(2 - 1/3) = -1 so the
        # distance term adds -log 3: total zero.
        assert value.exact == LogValue.zero()

    def test_irrational_needs_aggregate(self):
        pt = RadicalPoint(Fraction(2), 2, 0)
        with pytest.raises(InputError):
            local_height(Fraction(1), pt, Place.finite(7))
        supplied = local_height(
            Fraction(1), pt, Place.finite(7), distance_valuation=Fraction(0)
        )
        assert supplied.exact == LogValue.zero()


class TestAggregates:
    def test_class_sum_example(self):
        factor = factor_binomial(2, Fraction(2))[0]
        value = class_height_sum(factor, Fraction(1), 7)
        assert value.exact == LogValue.zero()

    def test_level_sum_matches_class_sums(self, rng):
        for beta, n in ((Fraction(4), 4), (Fraction(16), 4), (Fraction(1), 6)):
            alpha = Fraction(3)
            for p in (2, 3, 7):
                level = level_height_sum(alpha, beta, n, Place.finite(p))
                total = LogValue.zero()
                for factor in factor_binomial(n, beta):
                    total = total + class_height_sum(factor, alpha, p).exact
                assert level.exact == total

    def test_decomposition_identity_exact(self, rng):
        # Sum over all places and all level points of the local height
        # equals h(beta) + n*h(alpha), as LogValues.
        from orbitintegra.primes import factorize

        for _ in range(25):
            alpha = random_rational(rng, 10)
            beta = random_rational(rng, 10)
            n = rng.choice([1, 2, 3, 4, 8])
            if alpha == 0 or alpha**n == beta:
                continue
            resultant = alpha**n - beta
            total = level_height_sum(alpha, beta, n, INF, exact_archimedean=True).exact
            primes: set[int] = set()
            for value in (alpha, beta, resultant):
                primes.update(factorize(abs(value.numerator)))
                primes.update(factorize(value.denominator))
            for p in sorted(primes):
                total = total + level_height_sum(alpha, beta, n, Place.finite(p)).exact
            assert total == weil_height(beta) + n * weil_height(alpha)


class TestTruncation:
    def test_clamped_at_pole(self):
        value = truncated_local_height(Fraction(2), Fraction(2), INF, Fraction(1, 2), 128)
        assert abs(value.value() - (2 * math.log(2) + math.log(2))) < 1e-12

    def test_matches_plain_when_far(self):
        plain = local_height(Fraction(2), Fraction(1), INF, 128).value()
        truncated = truncated_local_height(Fraction(2), Fraction(1), INF, Fraction(1, 2), 128).value()
        assert abs(plain - truncated) < 1e-30

    def test_finite_place_exact_clamp(self):
        # |z - alpha|_7 = 1/7 < tau = 1/2 clamps to log(1/tau) = log 2.
        value = truncated_local_height(Fraction(3), Fraction(10), Place.finite(7), Fraction(1, 2))
        assert value.exact == LogValue({2: Fraction(1)})
        # with tau = 1/49 the distance is above the clamp again
        value = truncated_local_height(Fraction(3), Fraction(10), Place.finite(7), Fraction(1, 49))
        assert value.exact == LogValue({7: Fraction(1)})

    def test_monotone_in_tau(self, rng):
        z, alpha = Fraction(7, 5), Fraction(3, 2)
        previous = None
        for tau in (Fraction(9, 10), Fraction(1, 2), Fraction(1, 10)):
            value = truncated_local_height(alpha, z, INF, tau, 128).value()
            if previous is not None:
                assert value >= previous - 1e-30
            previous = value

    def test_tau_range(self):
        with pytest.raises(InputError):
            truncated_local_height(Fraction(2), Fraction(1), INF, Fraction(3, 2))


class TestEquilibrium:
    def test_exact_values(self):
        for alpha, place in ((Fraction(2), INF), (Fraction(5), Place.finite(3)), (Fraction(0), INF)):
            result = equilibrium_integral(alpha, place)
            assert result.value.is_zero()
        assert equilibrium_integral(Fraction(5), Place.finite(3)).derivation == "gauss-point-evaluation"
        assert equilibrium_integral(Fraction(2), INF).derivation == "jensen-circle-mean"

    def test_quadrature_cross_check(self):
        for alpha in (Fraction(1, 2), Fraction(2), GaussianRational.parse("3/5+4/5i")):
            assert abs(equilibrium_quadrature(alpha)) < 1e-6


class TestTruncationConstants:
    def test_archimedean_example(self):
        constants = truncation_constants(Fraction(1, 10), INF)
        assert constants.lipschitz == 11
        assert abs(constants.dirichlet - 4 * math.pi * math.log(10)) < 1e-12

    def test_non_archimedean_example(self):
        constants = truncation_constants(Fraction(1, 2), Place.finite(5))
        assert constants.lipschitz == 1
        assert constants.dirichlet_exact == LogValue({2: Fraction(1)})

    def test_tau_one(self):
        arch = truncation_constants(1, INF)
        fin = truncation_constants(1, Place.finite(3))
        assert arch.lipschitz == 2 and abs(arch.dirichlet) < 1e-30
        assert fin.lipschitz == 1 and fin.dirichlet_exact.is_zero()


class TestDirichletQuadrature:
    def test_closed_form_tau_half(self):
        value = dirichlet_quadrature(Fraction(2), 0.5, 1024)
        target = 4 * math.pi * math.log(2)
        assert abs(value - target) / target < 0.01

    def test_closed_form_tau_tenth(self):
        value = dirichlet_quadrature(Fraction(3, 10), 0.1, 2048)
        target = 4 * math.pi * math.log(10)
        assert abs(value - target) / target < 0.01

    def test_tau_one_vanishes(self):
        assert abs(dirichlet_quadrature(Fraction(2), 1.0, 512)) < 1e-3

    def test_chart_boundary_guard(self):
        with pytest.raises(InputError):
            dirichlet_quadrature(Fraction(1), 0.5, 512)

    def test_grid_floor(self):
        with pytest.raises(InputError):
            dirichlet_quadrature(Fraction(2), 0.5, 128)


class TestBoundEvaluators:
    def test_equidistribution_bound_formula(self):
        n = 256
        value = equidistribution_bound(n, 0.0, 0.1, 1.0, INF, kappa=1.0)
        expected = 11 / 256 + math.sqrt(math.log(256) / 16) * math.sqrt(
            4 * math.pi * math.log(10)
        )
        assert abs(value - expected) < 1e-12

    def test_decay_envelope_limit(self):
        values = [decay_envelope(4**k, 0.0, 1.0) for k in range(2, 10)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert values[-1] < 0.01

    def test_orbit_floor(self):
        with pytest.raises(InputError):
            equidistribution_bound(1, 0.0, 0.5, 1.0, INF)
