"""Verification harness: pairing convergence curves, equidistribution
discrepancies, archimedean closeness, the S-integral census, and the
frozen-constant bound suite.

The keystone is an exact identity: averaged over a full level x**n = beta,
the sum of local heights against a rational alpha equals
``h(alpha) + h(beta)/n`` as formal LogValues.  It reduces, through exact
bookkeeping of the log+ terms, to the product formula applied to
alpha**n - beta, so the harness asserts it symbolically and uses the float
evaluation only as a cross-check against direct per-root summation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Iterable, Sequence, Union

import mpmath as mp

from .arith import (
    LogValue,
    Place,
    default_precision,
    log_plus,
    log_rational,
    padic_valuation,
    weil_height,
)
from .binomial import capelli_irreducible, factor_binomial, galois_orbits
from .errors import DegenerateInputError, InputError, ResourceError, UnsupportedInputError
from .gaussian import GaussianRational, gaussian_weil_height, is_rational_preperiodic
from .integrality import (
    SIntegralityReport,
    full_level_s_integrality,
    is_s_integral,
    normalize_place_set,
)
from .localheights import level_height_sum
from .orbits import embed, preimages
from .padic import cluster_count, distance_profile
from .primes import factorize

__all__ = [
    "DepthRecord",
    "ClosenessReport",
    "CensusReport",
    "SuiteReport",
    "az_pairing_curve",
    "discrepancy",
    "archimedean_closeness",
    "s_integral_census",
    "bound_suite",
]


def _require_noncollision(alpha: Fraction, beta: Fraction, n: int, depth: int) -> None:
    if alpha ** n == beta:
        raise DegenerateInputError(
            f"alpha**{n} = beta at depth {depth}: the base point lies on the level"
        )


def _class_sizes(beta: Fraction, n: int) -> tuple[int, ...] | None:
    if n == 1:
        return (1,)
    if capelli_irreducible(n, beta):
        return (n,)
    if n <= 256:
        return tuple(sorted(f.degree for f in factor_binomial(n, beta)))
    return None


@dataclass
class DepthRecord:
    """Everything the harness learned about one level."""

    depth: int
    n: int
    class_sizes: tuple[int, ...] | None = None
    mean_height_sum: LogValue | None = None
    identity_holds: bool | None = None
    float_agreement: float | None = None
    discrepancies: dict[str, float] = field(default_factory=dict)
    verdicts: list[SIntegralityReport] | None = None

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "n": self.n,
            "class_sizes": list(self.class_sizes) if self.class_sizes else None,
            "mean_height_sum": (
                self.mean_height_sum.to_json() if self.mean_height_sum else None
            ),
            "identity_holds": self.identity_holds,
            "float_agreement": self.float_agreement,
            "discrepancies": dict(sorted(self.discrepancies.items())),
            "verdicts": (
                [v.to_json() for v in self.verdicts] if self.verdicts is not None else None
            ),
        }


def _support_primes(alpha: Fraction, beta: Fraction, resultant: Fraction) -> list[int]:
    primes: set[int] = set()
    primes.update(factorize(alpha.denominator))
    primes.update(factorize(abs(beta.numerator)))
    primes.update(factorize(beta.denominator))
    primes.update(factorize(abs(resultant.numerator)))
    primes.update(factorize(resultant.denominator))
    return sorted(primes)


def az_pairing_curve(
    alpha: Union[int, Fraction],
    beta: Union[int, Fraction],
    d: int,
    max_depth: int,
    precision: int | None = None,
) -> list[DepthRecord]:
    """Per-depth exact pairing identity and its float cross-check.

    At every depth the exact mean of the summed local heights is asserted
    equal, as a LogValue, to h(alpha) + h(beta)/n; the float side recomputes
    the archimedean term by direct per-root summation.  The finite support
    of the identity is the prime support of alpha, beta, and the resultant
    alpha**n - beta, whose exact logarithm requires factoring it, so keep
    depths inside the desk-scale factoring envelope.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha == 0:
        raise InputError("alpha must be nonzero")
    if beta == 0:
        raise InputError("beta must be nonzero")
    bits = precision if precision is not None else default_precision()
    target_base = weil_height(alpha)
    h_beta = weil_height(beta)

    records: list[DepthRecord] = []
    for m in range(1, max_depth + 1):
        n = d ** m
        _require_noncollision(alpha, beta, n, m)
        resultant = alpha ** n - beta

        arch_exact = log_plus(beta) + n * log_plus(alpha) - log_rational(abs(resultant))
        total = arch_exact
        finite: dict[str, float] = {}
        for p in _support_primes(alpha, beta, resultant):
            coeff = (
                max(Fraction(0), Fraction(-padic_valuation(beta, p)))
                + n * max(Fraction(0), Fraction(-padic_valuation(alpha, p)))
                + padic_valuation(resultant, p)
            )
            if coeff:
                term = LogValue({p: coeff})
                total = total + term
                finite[str(p)] = abs(float(term.numeric(bits)) / n)

        mean = total * Fraction(1, n)
        identity = mean == target_base + h_beta * Fraction(1, n)

        # Float cross-check of the archimedean aggregate by per-root sums.
        with mp.workprec(max(bits, 96)):
            level = preimages(beta, d, m)
            a = mp.mpf(alpha.numerator) / alpha.denominator
            log_plus_alpha = mp.log(max(mp.mpf(1), abs(a)))
            per_root = mp.mpf(0)
            for pt in level.points:
                z = embed(pt, max(bits, 96))
                per_root += (
                    mp.log(max(mp.mpf(1), abs(z))) + log_plus_alpha - mp.log(abs(z - a))
                )
            agreement = abs(float(arch_exact.numeric(max(bits, 96))) - float(per_root))

        discrepancies = dict(finite)
        discrepancies["inf"] = abs(float(arch_exact.numeric(bits)) / n)
        records.append(
            DepthRecord(
                depth=m,
                n=n,
                class_sizes=_class_sizes(beta, n),
                mean_height_sum=mean,
                identity_holds=identity,
                float_agreement=agreement,
                discrepancies=discrepancies,
            )
        )
    return records


def discrepancy(
    alpha,
    beta: Union[int, Fraction],
    d: int,
    depth: int,
    v: Place,
    precision: int | None = None,
) -> float:
    """Distance between the level mean of the local height and its
    equilibrium integral (which is zero at every place).

    The archimedean mean uses the exact resultant shortcut: the summed
    distance term over a full level is log|alpha**n - beta|.
    """
    n = d ** depth
    beta = Fraction(beta)
    sum_value = level_height_sum(alpha, beta, n, v, precision=precision)
    return abs(sum_value.value(precision) / n)


@dataclass(frozen=True)
class ClosenessReport:
    """Archimedean closest-approach data for one level, against the
    degree-cubed height bound."""

    alpha: str
    beta: str
    d: int
    depth: int
    n: int
    epsilon: float
    max_log_inverse_distance: float
    degree: int
    h_alpha: float
    h_s: float
    bound_base: float  # degree**3 * (h(alpha) + h(s) + 1) * n**epsilon
    implied_constant: float

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "d": self.d,
            "depth": self.depth,
            "n": self.n,
            "epsilon": self.epsilon,
            "max_log_inverse_distance": self.max_log_inverse_distance,
            "degree": self.degree,
            "h_alpha": self.h_alpha,
            "h_s": self.h_s,
            "bound_base": self.bound_base,
            "implied_constant": self.implied_constant,
        }


def archimedean_closeness(
    alpha,
    beta: Union[int, Fraction],
    d: int,
    depth: int,
    epsilon: float,
    precision: int | None = None,
) -> ClosenessReport:
    """Maximum of log(1/|z - alpha|) over a level at the archimedean
    place, compared against degree**3 * (h(alpha) + h(s) + 1) * n**epsilon.

    alpha may be rational or Gaussian rational (degree 1 or 2) but must
    not be preperiodic for the power map.
    """
    beta = Fraction(beta)
    if not isinstance(alpha, GaussianRational):
        alpha = GaussianRational.of(Fraction(alpha))
    if is_rational_preperiodic(alpha):
        raise InputError("alpha is preperiodic for the power map (zero or root of unity)")
    n = d ** depth
    if (alpha ** n - GaussianRational.of(beta)).is_zero():
        raise DegenerateInputError("alpha lies on the level")
    bits = precision if precision is not None else default_precision()
    level = preimages(beta, d, depth)
    with mp.workprec(bits):
        a = alpha.to_mpc(bits)
        closest = min(abs(embed(pt, bits) - a) for pt in level.points)
        max_log_inv = float(-mp.log(closest))
    degree = 1 if alpha.is_rational else 2
    h_alpha = float(
        weil_height(alpha.re).numeric(bits)
        if alpha.is_rational
        else gaussian_weil_height(alpha).numeric(bits)
    )
    h_s = float(weil_height(abs(beta)).numeric(bits)) / n
    base = degree ** 3 * (h_alpha + h_s + 1.0) * n ** epsilon
    return ClosenessReport(
        alpha=str(alpha),
        beta=str(beta),
        d=d,
        depth=depth,
        n=n,
        epsilon=epsilon,
        max_log_inverse_distance=max_log_inv,
        degree=degree,
        h_alpha=h_alpha,
        h_s=h_s,
        bound_base=base,
        implied_constant=max_log_inv / base,
    )


@dataclass
class CensusReport:
    """Per-depth S-integrality verdicts for every Galois class, plus the
    summary quantities the uniform-bound statements are about."""

    alpha: Fraction
    beta: Fraction
    d: int
    s_primes: tuple[int, ...]
    max_depth: int
    depths: list[DepthRecord]

    @property
    def integral_classes(self) -> list[tuple[int, int]]:
        """(depth, class size) for every S-integral class found."""
        out = []
        for record in self.depths:
            for verdict in record.verdicts or []:
                if verdict.verdict:
                    out.append((record.depth, verdict.class_size))
        return out

    @property
    def max_integral_class_size(self) -> int | None:
        sizes = [size for _, size in self.integral_classes]
        return max(sizes) if sizes else None

    @property
    def first_depth_attaining_max(self) -> int | None:
        m = self.max_integral_class_size
        if m is None:
            return None
        return min(depth for depth, size in self.integral_classes if size == m)

    @property
    def stabilization_depth(self) -> int | None:
        """Depth of the deepest S-integral class, or None when there are
        none; no S-integral class appears past it up to max_depth."""
        depths = [depth for depth, _ in self.integral_classes]
        return max(depths) if depths else None

    def exceptional_count(self, threshold: int) -> int:
        """Number of S-integral classes of size strictly above the
        threshold."""
        return sum(1 for _, size in self.integral_classes if size > threshold)

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "d": self.d,
            "S": ["inf", *self.s_primes],
            "max_depth": self.max_depth,
            "depths": [r.to_json() for r in self.depths],
            "summary": {
                "integral_classes": self.integral_classes,
                "max_integral_class_size": self.max_integral_class_size,
                "first_depth_attaining_max": self.first_depth_attaining_max,
                "stabilization_depth": self.stabilization_depth,
            },
        }


def s_integral_census(
    alpha: Union[int, Fraction],
    beta: Union[int, Fraction],
    d: int,
    S: Iterable,
    max_depth: int,
) -> CensusReport:
    """Decide S-integrality of every Galois class at every depth.

    Irreducible levels (the generic case, certified by the binomial
    irreducibility test) are decided at any size through exact valuation
    bookkeeping; reducible levels are factored, which caps them at degree
    256.  alpha must be rational and not preperiodic.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if is_rational_preperiodic(alpha):
        raise InputError(
            "alpha is preperiodic for the power map (fixed by z**d up to roots of unity)"
        )
    if beta == 0:
        raise InputError("beta must be nonzero")
    s_primes = normalize_place_set(S)
    records: list[DepthRecord] = []
    for m in range(1, max_depth + 1):
        n = d ** m
        _require_noncollision(alpha, beta, n, m)
        if n == 1 or capelli_irreducible(n, beta):
            verdicts = [full_level_s_integrality(alpha, beta, n, ["inf", *s_primes])]
            sizes: tuple[int, ...] = (n,)
        elif n <= 256:
            partition = galois_orbits(preimages(beta, d, m))
            verdicts = [
                is_s_integral(orbit_class, alpha, ["inf", *s_primes])
                for orbit_class in partition.classes
            ]
            sizes = partition.sizes
        else:
            raise ResourceError(
                f"depth {m} is reducible with degree {n} > 256: out of desk scale"
            )
        records.append(
            DepthRecord(depth=m, n=n, class_sizes=sizes, verdicts=verdicts)
        )
    return CensusReport(
        alpha=alpha,
        beta=beta,
        d=d,
        s_primes=s_primes,
        max_depth=max_depth,
        depths=records,
    )


# ---------------------------------------------------------------------------
# Bound suite


@dataclass
class CellResult:
    index: int
    kind: str
    passed: bool
    lhs: float
    rhs: float
    implied_constant: float
    detail: dict

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "passed": self.passed,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "implied_constant": self.implied_constant,
            "detail": self.detail,
        }


@dataclass
class SuiteReport:
    cells: list[CellResult]

    @property
    def all_passed(self) -> bool:
        return all(cell.passed for cell in self.cells)

    def to_json(self) -> dict:
        return {"all_passed": self.all_passed, "cells": [c.to_json() for c in self.cells]}

    def to_csv_rows(self) -> list[str]:
        rows = ["index,kind,passed,lhs,rhs,implied_constant"]
        for c in self.cells:
            rows.append(
                f"{c.index},{c.kind},{int(c.passed)},{c.lhs!r},{c.rhs!r},{c.implied_constant!r}"
            )
        return rows


def _parse_point(text: str):
    value = GaussianRational.parse(str(text))
    return value.re if value.is_rational else value


def _decay_statistic(alpha, beta, d: int, depth: int, place: Place) -> float:
    n = d ** depth
    value = discrepancy(alpha, beta, d, depth, place)
    return value * math.sqrt(n / math.log(n))


def _cell_az_rate(cell: dict) -> tuple[float, float, float, dict]:
    alpha = Fraction(cell["alpha"])
    beta = Fraction(cell["beta"])
    d = int(cell["d"])
    constant = float(cell.get("C", 1.0))
    worst_lhs = worst_rhs = worst_ratio = 0.0
    per_depth = {}
    h_beta = float(weil_height(beta).numeric())
    for m in cell["depths"]:
        n = d ** int(m)
        lhs = h_beta / n
        base = (1.0 + math.log(math.sqrt(n))) / math.sqrt(n)
        rhs = constant * base
        per_depth[str(m)] = {"lhs": lhs, "rhs": rhs}
        if lhs / base > worst_ratio:
            worst_ratio, worst_lhs, worst_rhs = lhs / base, lhs, rhs
    return worst_lhs, worst_rhs, worst_ratio, {"per_depth": per_depth}


def _cell_discrepancy_decay(cell: dict) -> tuple[float, float, float, dict]:
    alpha = _parse_point(cell["alpha"])
    beta = Fraction(cell["beta"])
    d = int(cell["d"])
    place = Place.infinity() if cell.get("place", "inf") == "inf" else Place.finite(int(cell["place"]))
    depths = [int(m) for m in cell["depths"]]
    baseline_depth = int(cell.get("baseline_depth", depths[0]))
    ratio_limit = float(cell.get("ratio_limit", 4.0))
    values = {m: _decay_statistic(alpha, beta, d, m, place) for m in depths}
    baseline = values[baseline_depth]
    frozen = cell.get("baseline_value")
    detail = {
        "values": {str(m): values[m] for m in depths},
        "baseline_depth": baseline_depth,
        "baseline_value": baseline,
        "frozen_baseline": frozen,
    }
    worst = max(values.values())
    rhs = ratio_limit * baseline
    implied = worst / baseline if baseline else math.inf
    if frozen is not None and abs(baseline - float(frozen)) > 1e-9:
        # Regression against the committed calibration value.
        return worst, rhs, implied, {**detail, "baseline_drift": True}
    return worst, rhs, implied, detail


def _cell_clustering(cell: dict) -> tuple[float, float, float, dict]:
    rng = Random(int(cell.get("seed", 2024)))
    samples = int(cell.get("samples", 1000))
    n_max = int(cell.get("n_max", 64))
    p_max = int(cell.get("p_max", 97))
    epsilon = Fraction(str(cell.get("epsilon", "1/2")))
    from .primes import primes_below

    prime_pool = [p for p in primes_below(p_max + 1)]
    violations = 0
    worst_count = 0
    for _ in range(samples):
        p = rng.choice(prime_pool)
        n = rng.randint(2, n_max)
        alpha = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
        beta = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
        if beta == 0 or alpha ** n == beta:
            continue
        profile = distance_profile(alpha, beta, n, p)
        v_beta = Fraction(padic_valuation(beta, p), n)
        pair_threshold = v_beta + Fraction(1, p - 1)
        if cluster_count(profile, pair_threshold) > 1:
            violations += 1
        shape_count = cluster_count(profile, v_beta + epsilon)
        shape_bound = p * math.log(p) / float(epsilon) + 1
        worst_count = max(worst_count, shape_count)
        if shape_count > shape_bound:
            violations += 1
    return float(violations), 0.0, float(violations), {
        "samples": samples,
        "violations": violations,
        "worst_cluster": worst_count,
    }


def _cell_closeness(cell: dict) -> tuple[float, float, float, dict]:
    alpha = _parse_point(cell["alpha"])
    beta = Fraction(cell["beta"])
    report = archimedean_closeness(
        alpha, beta, int(cell["d"]), int(cell["depth"]), float(cell["epsilon"])
    )
    c_eps = float(cell.get("C_eps", 1.0))
    lhs = report.max_log_inverse_distance
    rhs = c_eps * report.bound_base
    return lhs, rhs, report.implied_constant, report.to_json()


def _cell_log_equidistribution(cell: dict) -> tuple[float, float, float, dict]:
    alpha = _parse_point(cell["alpha"])
    beta = Fraction(cell["beta"])
    d = int(cell["d"])
    depth = int(cell["depth"])
    delta = float(cell["delta"])
    big_a = float(cell.get("A", 1.0))
    c7 = float(cell.get("C7", 1.0))
    n = d ** depth
    place = Place.infinity() if cell.get("place", "inf") == "inf" else Place.finite(int(cell["place"]))
    closeness = archimedean_closeness(alpha, beta, d, depth, 0.5 - delta)
    hypothesis = closeness.max_log_inverse_distance < big_a * closeness.bound_base
    lhs = discrepancy(alpha, beta, d, depth, place)
    scale = (
        big_a
        * (closeness.h_alpha + closeness.h_s + 1.0)
        * math.sqrt(math.log(n))
        / n ** delta
    )
    rhs = c7 * scale
    implied = lhs / scale if scale else math.inf
    return lhs, rhs, implied, {
        "hypothesis_holds": hypothesis,
        "closeness": closeness.to_json(),
    }


_CELL_EVALUATORS = {
    "az_rate": _cell_az_rate,
    "discrepancy_decay": _cell_discrepancy_decay,
    "clustering": _cell_clustering,
    "closeness": _cell_closeness,
    "log_equidistribution": _cell_log_equidistribution,
}


def bound_suite(config: Union[dict, str]) -> SuiteReport:
    """Evaluate every configured bound cell against its frozen constants.

    The config is a dict (or a path to a JSON document) with a ``cells``
    list.  Failures are reported in the cell results, never raised.
    """
    if isinstance(config, str):
        with open(config, "r", encoding="utf-8") as handle:
            config = json.load(handle)
    cells = config.get("cells", [])
    results: list[CellResult] = []
    for index, cell in enumerate(cells):
        kind = cell.get("kind")
        if kind not in _CELL_EVALUATORS:
            results.append(
                CellResult(
                    index=index,
                    kind=str(kind),
                    passed=False,
                    lhs=math.nan,
                    rhs=math.nan,
                    implied_constant=math.nan,
                    detail={"error": f"unknown cell kind {kind!r}"},
                )
            )
            continue
        lhs, rhs, implied, detail = _CELL_EVALUATORS[kind](cell)
        if kind == "clustering":
            passed = lhs == 0.0
        elif kind == "discrepancy_decay":
            passed = lhs <= rhs and not detail.get("baseline_drift", False)
        else:
            passed = lhs <= rhs
        results.append(
            CellResult(
                index=index,
                kind=kind,
                passed=passed,
                lhs=lhs,
                rhs=rhs,
                implied_constant=implied,
                detail=detail,
            )
        )
    return SuiteReport(cells=results)
