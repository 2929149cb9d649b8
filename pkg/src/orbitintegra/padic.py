"""Newton polygons and exact p-adic distance profiles between a rational
base point and all level-n preimages.

The valuations v_p(z_j - alpha), as j runs over the solutions of
x**n = beta, are the root valuations of g(y) = (y + alpha)**n - beta,
read off the lower Newton polygon of g at p.  Which root carries which
valuation is deliberately left unresolved (the local Galois action can
permute them); every statement downstream is a multiset statement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .arith import padic_valuation
from .errors import DegenerateInputError, DomainError, InputError
from .primes import is_prime

__all__ = [
    "NewtonPolygon",
    "newton_polygon",
    "distance_profile",
    "cluster_count",
    "min_distance_bound",
    "min_distance_scan",
    "MinDistanceScan",
]


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of (index, valuation) points of a polynomial.

    Segments carry (root valuation, multiplicity) pairs: root valuations
    are the negated hull slopes, in decreasing order, and multiplicities
    sum to the degree.
    """

    prime: int
    vertices: tuple[tuple[int, Fraction], ...]
    segments: tuple[tuple[Fraction, int], ...]

    @property
    def degree(self) -> int:
        return self.vertices[-1][0]

    def root_valuations(self) -> tuple[Fraction, ...]:
        """The full multiset of root valuations, in decreasing order."""
        out: list[Fraction] = []
        for valuation, multiplicity in self.segments:
            out.extend([valuation] * multiplicity)
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "vertices": [[k, f"{v.numerator}/{v.denominator}"] for k, v in self.vertices],
            "segments": [
                [f"{w.numerator}/{w.denominator}", m] for w, m in self.segments
            ],
        }


def _lower_hull(points: list[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    # Andrew's monotone chain, lower part only; points arrive sorted by
    # abscissa with no duplicates.
    hull: list[tuple[int, Fraction]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # Pop hull[-1] unless the path turns strictly upward there
            # (slopes must increase along the lower hull).
            if (x2 - x1) * (pt[1] - y1) <= (y2 - y1) * (pt[0] - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon(coeffs: Sequence[Union[int, Fraction]], p: int) -> NewtonPolygon:
    """Newton polygon at p of the polynomial with the given coefficients,
    constant term first.

    Interior zero coefficients are treated as valuation +infinity and
    simply skipped; a zero constant term is rejected (deflate the root at
    zero first), as is a zero leading coefficient.
    """
    if not is_prime(p):
        raise InputError(f"newton_polygon requires a prime, got {p}")
    cs = [Fraction(c) for c in coeffs]
    if len(cs) < 2:
        raise InputError("need a polynomial of degree >= 1")
    if cs[0] == 0:
        raise InputError("zero constant term: deflate the root at 0 first")
    if cs[-1] == 0:
        raise InputError("leading coefficient must be nonzero")
    points = [
        (k, Fraction(padic_valuation(c, p))) for k, c in enumerate(cs) if c != 0
    ]
    hull = _lower_hull(points)
    segments: list[tuple[Fraction, int]] = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        segments.append((-slope, x2 - x1))
    return NewtonPolygon(prime=p, vertices=tuple(hull), segments=tuple(segments))


def _binomial_valuations(n: int, p: int) -> list[int]:
    """v_p(C(n, k)) for k = 0..n, via prefix sums of v_p(k!)."""
    fact = [0] * (n + 1)
    for k in range(1, n + 1):
        v, m = 0, k
        while m % p == 0:
            m //= p
            v += 1
        fact[k] = fact[k - 1] + v
    return [fact[n] - fact[k] - fact[n - k] for k in range(n + 1)]


def distance_profile(
    alpha: Union[int, Fraction], beta: Union[int, Fraction], n: int, p: int
) -> tuple[Fraction, ...]:
    """The multiset of valuations v_p(z_j - alpha) over the n solutions of
    x**n = beta, in decreasing order.

    These are the root valuations of (y + alpha)**n - beta.  The
    coefficient valuations are computed term by term (binomial-coefficient
    valuation plus the valuation of the power of alpha), which agrees
    exactly with expanding the shift since v_p is multiplicative; only the
    constant term alpha**n - beta needs big-integer arithmetic.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if beta == 0:
        raise DomainError("beta must be nonzero")
    if n < 1:
        raise InputError(f"level size must be positive, got {n}")
    if not is_prime(p):
        raise InputError(f"distance_profile requires a prime, got {p}")
    constant = alpha ** n - beta
    if constant == 0:
        raise DegenerateInputError("alpha**n = beta: a preimage coincides with alpha")

    points: list[tuple[int, Fraction]] = [(0, Fraction(padic_valuation(constant, p)))]
    if alpha == 0:
        points.append((n, Fraction(0)))
    else:
        v_alpha = padic_valuation(alpha, p)
        binom = _binomial_valuations(n, p)
        points.extend(
            (k, Fraction(binom[k] + (n - k) * v_alpha)) for k in range(1, n + 1)
        )
    hull = _lower_hull(points)
    profile: list[Fraction] = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        profile.extend([-slope] * (x2 - x1))
    return tuple(profile)


def cluster_count(profile: Sequence[Fraction], threshold: Union[int, Fraction]) -> int:
    """Number of profile entries strictly greater than the threshold,
    counted with multiplicity."""
    t = Fraction(threshold)
    return sum(1 for entry in profile if entry > t)


@dataclass(frozen=True)
class MinDistanceScan:
    """Depth scan of the closest p-adic approach of a backward orbit to a
    unit base point."""

    alpha: Fraction
    beta: Fraction
    prime: int
    d: int
    max_depth: int
    per_depth: tuple[tuple[int, Fraction], ...]  # (depth, max profile entry)
    value: Fraction  # max over depths; the valuation form of 1/M(alpha)
    stabilized_at: int  # first depth attaining the final value

    @property
    def confirmed(self) -> bool:
        """True when deeper levels past the attaining depth were scanned
        without producing a closer point."""
        return self.stabilized_at < self.max_depth


def min_distance_scan(
    alpha: Union[int, Fraction],
    beta: Union[int, Fraction],
    p: int,
    max_depth: int,
    d: int = 2,
) -> MinDistanceScan:
    """Scan depths 0..max_depth of the backward orbit of beta under
    z -> z**d and track the largest valuation v_p(z - alpha) seen.

    Requires v_p(alpha) = 0 (the base point is a p-adic unit); each level
    must avoid the degenerate collision alpha**n = beta.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if beta == 0:
        raise DomainError("beta must be nonzero")
    if alpha == 0 or padic_valuation(alpha, p) != 0:
        raise InputError(
            f"hypothesis |alpha|_p = 1 failed: v_{p}({alpha}) != 0"
        )
    if d < 2:
        raise InputError(f"map degree must be >= 2, got {d}")
    if max_depth < 0:
        raise InputError("max_depth must be >= 0")
    per_depth: list[tuple[int, Fraction]] = []
    best: Fraction | None = None
    attained = 1
    for m in range(1, max_depth + 1):
        n = d ** m
        profile = distance_profile(alpha, beta, n, p)
        top = max(profile)
        per_depth.append((m, top))
        if best is None or top > best:
            best = top
            attained = m
    return MinDistanceScan(
        alpha=alpha,
        beta=beta,
        prime=p,
        d=d,
        max_depth=max_depth,
        per_depth=tuple(per_depth),
        value=best,
        stabilized_at=attained,
    )


def min_distance_bound(
    alpha: Union[int, Fraction],
    beta: Union[int, Fraction],
    p: int,
    max_depth: int,
    d: int = 2,
) -> Fraction:
    """Largest valuation v_p(z - alpha) over all scanned levels: the
    valuation form of the uniform lower distance bound M(alpha)."""
    return min_distance_scan(alpha, beta, p, max_depth, d).value
