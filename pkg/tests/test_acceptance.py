"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one pass/fail line (run with ``pytest -s`` to see them
inline).  Tolerances and runtime ceilings are pinned here, not deferred:
exact statements are asserted as LogValue equalities, numeric ones at the
stated epsilon, and regression cells against the committed calibration
baselines in data/bound_suite_default.json.
"""

import json
import math
import time
from fractions import Fraction
from random import Random

import importlib.resources

import mpmath as mp
import pytest

from orbitintegra.arith import LogValue, Place, padic_valuation, weil_height
from orbitintegra.binomial import capelli_irreducible, factor_binomial, subset_factor_oracle
from orbitintegra.gaussian import GaussianRational
from orbitintegra.harness import (
    archimedean_closeness,
    az_pairing_curve,
    bound_suite,
    discrepancy,
    s_integral_census,
)
from orbitintegra.localheights import dirichlet_quadrature, equilibrium_quadrature
from orbitintegra.padic import cluster_count, distance_profile, newton_polygon
from orbitintegra.primes import primes_below

from conftest import random_rational
from quadratic_oracle import oracle_quadratic_profile

INF = Place.infinity()


def _report(index: int, name: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {index:2d} [{status}] {name}{suffix}")
    assert passed, f"criterion {index} failed: {name} {suffix}"


# --------------------------------------------------------------------------
# 1. Exact product formula on 10,000 random rationals in < 5 s.


def test_01_product_formula_bulk():
    from orbitintegra.arith import product_formula_check

    rng = Random(11)
    corpus = [random_rational(rng, 64) for _ in range(10_000)]
    start = time.monotonic()
    ok = True
    for value in corpus:
        record = product_formula_check(value)
        ok = ok and record.total.is_zero()
    elapsed = time.monotonic() - start
    _report(1, "exact product formula, 10k rationals", ok and elapsed < 5.0,
            f"{elapsed:.2f}s")


# --------------------------------------------------------------------------
# 2. Exact pairing identity over a 30-cell grid, depths up to n = 1024,
#    float side within 1e-9, in < 60 s.

AZ_GRID = (
    # (alpha, beta, d, max_depth); deep height-zero cells reach n = 1024
    [(Fraction(s), Fraction(b), 2, 10) for s in (1, -1) for b in (2, 3, 5, -2, 7)]
    + [
        (Fraction(1), Fraction(2), 3, 6),
        (Fraction(1), Fraction(3), 3, 6),
        (Fraction(-1), Fraction(3), 3, 6),
        (Fraction(-1), Fraction(5), 3, 6),
    ]
    + [
        (Fraction(2), Fraction(2), 2, 5),
        (Fraction(3), Fraction(2), 2, 5),
        (Fraction(2), Fraction(3), 2, 5),
        (Fraction(3), Fraction(5), 2, 5),
        (Fraction(1, 2), Fraction(2), 2, 5),
        (Fraction(2, 3), Fraction(5), 2, 5),
        (Fraction(5), Fraction(2), 2, 5),
        (Fraction(3, 2), Fraction(2), 2, 5),
        (Fraction(2), Fraction(-2), 2, 5),
        (Fraction(-2), Fraction(3), 2, 5),
        (Fraction(1, 3), Fraction(2), 2, 5),
        (Fraction(5, 2), Fraction(3), 2, 5),
        (Fraction(2), Fraction(2), 3, 3),
        (Fraction(3), Fraction(2), 3, 3),
        (Fraction(2), Fraction(5), 3, 3),
        (Fraction(-2), Fraction(7), 3, 3),
    ]
)


def test_02_pairing_identity_grid():
    assert len(AZ_GRID) == 30
    start = time.monotonic()
    exact = True
    float_ok = True
    max_n = 0
    for alpha, beta, d, max_depth in AZ_GRID:
        records = az_pairing_curve(alpha, beta, d, max_depth)
        target = weil_height(alpha)
        h_beta = weil_height(beta)
        for record in records:
            exact = exact and record.identity_holds
            exact = exact and record.mean_height_sum == target + h_beta * Fraction(
                1, record.n
            )
            float_ok = float_ok and record.float_agreement < 1e-9
            max_n = max(max_n, record.n)
    elapsed = time.monotonic() - start
    _report(
        2,
        "exact pairing identity over 30-cell grid",
        exact and float_ok and max_n == 1024 and elapsed < 60.0,
        f"max n {max_n}, {elapsed:.2f}s",
    )


# --------------------------------------------------------------------------
# 3. Factorization oracle equivalence (n <= 16) and Capelli consistency
#    (n <= 64) over a 50-value corpus, in < 120 s.

BETA_CORPUS = [
    Fraction(v)
    for v in (2, 3, 5, 6, 7, 10, 11, 13, -2, -3, -5, -7, 4, 8, 9, 16, 25, 27,
              32, 64, 36, 49, 100, 121, -4, -8, -16, -27, -32, -64, 1, -1, 12,
              18, 45, 98, 50, 72)
] + [
    Fraction(1, 2), Fraction(3, 4), Fraction(4, 9), Fraction(8, 27),
    Fraction(2, 3), Fraction(9, 4), Fraction(-1, 2), Fraction(-8, 125),
    Fraction(27, 8), Fraction(-4, 9), Fraction(5, 8), Fraction(125, 64),
]


def test_03_factorization_oracle_equivalence():
    assert len(BETA_CORPUS) == 50
    start = time.monotonic()
    oracle_ok = True
    capelli_ok = True
    for beta in BETA_CORPUS:
        for n in range(1, 17):
            produced = [f.coeffs for f in factor_binomial(n, beta)]
            expected = [f.coeffs for f in subset_factor_oracle(n, beta)]
            if produced != expected:
                oracle_ok = False
        for n in range(1, 65):
            single = len(factor_binomial(n, beta)) == 1
            if single != capelli_irreducible(n, beta):
                capelli_ok = False
    elapsed = time.monotonic() - start
    _report(
        3,
        "factor_binomial == subset oracle (n<=16) and Capelli (n<=64), 50 bases",
        oracle_ok and capelli_ok and elapsed < 120.0,
        f"{elapsed:.2f}s",
    )


# --------------------------------------------------------------------------
# 4. Newton polygon slope-sum identity on 1,000 shifted binomials in < 10 s,
#    and the n = 2 quadratic oracle on 200 triples.


def test_04_newton_polygon_identities():
    rng = Random(4)
    start = time.monotonic()
    slope_ok = True
    count = 0
    while count < 1000:
        alpha = random_rational(rng, 16)
        beta = random_rational(rng, 16)
        n = rng.randint(2, 64)
        p = rng.choice([2, 3, 5, 7, 11, 13, 31, 97])
        if beta == 0 or alpha**n == beta:
            continue
        profile = distance_profile(alpha, beta, n, p)
        if sum(profile) != padic_valuation(alpha**n - beta, p):
            slope_ok = False
        count += 1

    oracle_ok = True
    count = 0
    while count < 200:
        alpha = random_rational(rng, 14)
        beta = random_rational(rng, 14)
        p = rng.choice([2, 3, 5, 7, 11, 13, 17, 19, 23, 29])
        if beta == 0 or alpha * alpha == beta:
            continue
        if list(distance_profile(alpha, beta, 2, p)) != oracle_quadratic_profile(
            alpha, beta, p
        ):
            oracle_ok = False
        count += 1
    elapsed = time.monotonic() - start
    _report(
        4,
        "slope-sum identity x1000 and quadratic oracle x200",
        slope_ok and oracle_ok and elapsed < 10.0,
        f"{elapsed:.2f}s",
    )


# --------------------------------------------------------------------------
# 5. Clustering bounds: adjusted-threshold cluster count <= 1 and the
#    p log(p)/eps + 1 shape, 1,000 samples, zero violations.


def test_05_clustering_bounds():
    rng = Random(5)
    primes = [p for p in primes_below(98)]
    pair_violations = 0
    shape_violations = 0
    epsilon = Fraction(1, 2)
    count = 0
    while count < 1000:
        alpha = random_rational(rng, 16)
        beta = random_rational(rng, 16)
        n = rng.randint(2, 64)
        p = rng.choice(primes)
        if beta == 0 or alpha**n == beta:
            continue
        profile = distance_profile(alpha, beta, n, p)
        base = Fraction(padic_valuation(beta, p), n)
        if cluster_count(profile, base + Fraction(1, p - 1)) > 1:
            pair_violations += 1
        if cluster_count(profile, base + epsilon) > p * math.log(p) / float(epsilon) + 1:
            shape_violations += 1
        count += 1
    _report(
        5,
        "clustering: pairwise <= 1 and p*log(p)/eps + 1 shape, 1000 samples",
        pair_violations == 0 and shape_violations == 0,
        f"violations {pair_violations}/{shape_violations}",
    )


# --------------------------------------------------------------------------
# 6. Dirichlet quadrature reproduces -4*pi*log(tau) within 1% at grid 2048.


def test_06_dirichlet_quadrature():
    start = time.monotonic()
    ok = True
    for tau, alpha in ((0.5, Fraction(2)), (0.1, Fraction(3, 10))):
        target = -4 * math.pi * math.log(tau)
        value = dirichlet_quadrature(alpha, tau, 2048)
        ok = ok and abs(value - target) / target < 0.01
    elapsed = time.monotonic() - start
    _report(6, "Dirichlet quadrature within 1% of -4*pi*log(tau)",
            ok and elapsed < 30.0, f"{elapsed:.2f}s")


# --------------------------------------------------------------------------
# 7. Jensen / equilibrium integrals vanish to 1e-6 under circle quadrature.


def test_07_equilibrium_circle_quadrature():
    values = [
        equilibrium_quadrature(Fraction(1, 2)),
        equilibrium_quadrature(GaussianRational.parse("3/5+4/5i")),
        equilibrium_quadrature(Fraction(2)),
    ]
    ok = all(abs(v) < 1e-6 for v in values)
    _report(7, "circle quadrature of the equilibrium integral within 1e-6 of 0",
            ok, ", ".join(f"{v:.2e}" for v in values))


# --------------------------------------------------------------------------
# 8. Discrepancy decay: D(n) * sqrt(n / log n) stays below 4x its depth-6
#    value for depths 6..12, against the committed calibration baseline.


def test_08_discrepancy_decay_regression():
    resource = importlib.resources.files("orbitintegra").joinpath(
        "data/bound_suite_default.json"
    )
    config = json.loads(resource.read_text(encoding="utf-8"))
    decay_cells = [c for c in config["cells"] if c["kind"] == "discrepancy_decay"]
    archimedean = [c for c in decay_cells if c["place"] == "inf"]
    assert {c["alpha"] for c in archimedean} == {"2", "3", "3/5+4/5i"}
    report = bound_suite({"cells": decay_cells})
    ok = report.all_passed
    details = []
    for cell, result in zip(decay_cells, report.cells):
        baseline = result.detail["baseline_value"]
        frozen = cell["baseline_value"]
        ok = ok and abs(baseline - frozen) < 1e-9
        details.append(f"{cell['alpha']}@{cell['place']}: ratio {result.implied_constant:.3f}")
    _report(8, "discrepancy decay below 4x frozen depth-6 baseline", ok,
            "; ".join(details))


# --------------------------------------------------------------------------
# 9. Finiteness census for (3, 2) with S = {inf} and S = {inf, 7} to depth
#    12: stabilization by depth 4, depth-1 verdicts match the hand-derived
#    witness, in < 60 s.


def test_09_finiteness_census():
    start = time.monotonic()
    assert distance_profile(3, 2, 2, 7) == (Fraction(1), Fraction(0))

    bare = s_integral_census(Fraction(3), Fraction(2), 2, ["inf"], 12)
    enlarged = s_integral_census(Fraction(3), Fraction(2), 2, ["inf", 7], 12)
    elapsed = time.monotonic() - start

    ok = bare.integral_classes == []
    depth1 = bare.depths[0].verdicts[0]
    ok = ok and not depth1.verdict
    ok = ok and [(w.prime, w.valuation) for w in depth1.witnesses] == [(7, Fraction(1))]

    ok = ok and enlarged.integral_classes == [(1, 2)]
    ok = ok and enlarged.depths[0].verdicts[0].verdict
    stability = enlarged.stabilization_depth
    ok = ok and stability is not None and stability <= 4
    _report(9, "finiteness census stabilizes by depth 4 with exact witnesses",
            ok and elapsed < 60.0, f"stabilized at {stability}, {elapsed:.2f}s")


# --------------------------------------------------------------------------
# 10. Uniform-bound shape over a 20-configuration census grid to depth 12:
#     the max S-integral class size is attained by depth 3 and never grows,
#     nothing exceeds it, and classes above the frozen threshold never
#     outnumber |S_fin|.

CENSUS_GRID = [
    # (alpha, beta, d, S_fin, frozen_threshold)
    (Fraction(3), Fraction(2), 2, (), None),
    (Fraction(3), Fraction(2), 2, (7,), 2),
    (Fraction(2), Fraction(3), 2, (), 2),
    (Fraction(3), Fraction(7), 2, (2,), 2),
    (Fraction(5), Fraction(2), 2, (23,), 2),
    (Fraction(5), Fraction(3), 2, (2, 11), 2),
    (Fraction(2), Fraction(5), 2, (), 2),
    (Fraction(3), Fraction(5), 2, (2,), 2),
    (Fraction(5), Fraction(7), 2, (2, 3), 2),
    (Fraction(7), Fraction(2), 2, (47,), 2),
    (Fraction(2), Fraction(7), 2, (3,), 2),
    (Fraction(3), Fraction(2), 2, (7, 79), 4),
    (Fraction(3), Fraction(2), 2, (7, 79, 937), 8),
    (Fraction(2, 3), Fraction(5), 2, (), None),
    (Fraction(5, 2), Fraction(3), 2, (13,), 2),
    (Fraction(7), Fraction(3), 2, (2, 23), 2),
    (Fraction(4), Fraction(3), 2, (13,), 2),
    (Fraction(2), Fraction(3), 3, (5,), 3),
    (Fraction(3), Fraction(2), 3, (5,), 3),
    (Fraction(5), Fraction(2), 3, (3, 41), 3),
]


def test_10_uniform_bound_census_grid():
    assert len(CENSUS_GRID) == 20
    start = time.monotonic()
    ok = True
    attained_depths = []
    for alpha, beta, d, s_fin, frozen in CENSUS_GRID:
        census = s_integral_census(alpha, beta, d, ["inf", *s_fin], 12)
        max_size = census.max_integral_class_size
        if frozen is None:
            ok = ok and max_size is None
            continue
        # Attained early and never exceeded later.
        ok = ok and max_size == frozen
        first = census.first_depth_attaining_max
        ok = ok and first is not None and first <= 3
        early_max = max(
            (size for depth, size in census.integral_classes if depth <= 3),
            default=None,
        )
        ok = ok and early_max == max_size
        attained_depths.append(first)
        # Nothing above the global max, and nothing above the frozen
        # calibration threshold beyond |S_fin| many classes.
        ok = ok and census.exceptional_count(max_size) == 0
        ok = ok and census.exceptional_count(frozen) <= len(s_fin)
    elapsed = time.monotonic() - start
    _report(
        10,
        "uniform-bound census shape over 20 configurations to depth 12",
        ok,
        f"max sizes attained at depths {sorted(set(attained_depths))}, {elapsed:.2f}s",
    )
