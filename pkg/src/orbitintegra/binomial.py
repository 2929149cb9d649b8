"""Factorization of x**n - beta over the rationals and Galois orbits of a
backward-orbit level.

The primitive integer model of x**n - a/b (lowest terms) is b*x**n - a.
Factorization of that model into irreducibles partitions the level's point
indices into Galois orbits; the size of the orbit through a point is the
degree of its minimal polynomial.  Two independent routes are provided: the
production factorizer (modular factorization with Hensel lifting and
subset recombination, plus cheap irreducibility certificates) and a
brute-force oracle that assembles candidate factors from subsets of
embedded roots and certifies them by exact division.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence, Union

import mpmath as mp

from .errors import CertificationError, InputError, ResourceError
from .orbits import OrbitLevel, RadicalPoint, embed
from .primes import euler_totient, factorize, integer_nth_root
from .zassenhaus import factor_primitive_binomial

__all__ = [
    "IntPolynomial",
    "GaloisOrbitPartition",
    "OrbitClass",
    "capelli_irreducible",
    "factor_binomial",
    "subset_factor_oracle",
    "galois_orbits",
    "degree_bound_report",
    "DegreeBoundReport",
    "phi_consistency_report",
    "rational_nth_power_root",
]

logger = logging.getLogger(__name__)

MAX_FACTOR_DEGREE = 256
ORACLE_MAX_DEGREE = 16
_ORACLE_PRECISION = 256


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial, constant term first, nonzero leading
    coefficient."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coeffs or self.coeffs[-1] == 0:
            raise InputError("leading coefficient must be nonzero")

    @classmethod
    def of(cls, coeffs: Iterable[int]) -> "IntPolynomial":
        cs = list(coeffs)
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        return cls(tuple(int(c) for c in cs))

    @classmethod
    def binomial_model(cls, n: int, beta: Fraction) -> "IntPolynomial":
        """Primitive integer model b*x**n - a of x**n - beta."""
        if n < 1:
            raise InputError(f"degree must be positive, got {n}")
        if beta == 0:
            raise InputError("base must be nonzero")
        coeffs = [0] * (n + 1)
        coeffs[0] = -beta.numerator
        coeffs[n] = beta.denominator
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, abs(c))
        return g

    def __call__(self, x):
        result = 0 if not isinstance(x, (mp.mpf, mp.mpc)) else mp.mpf(0)
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial.of(out)

    def scale(self, k: int) -> "IntPolynomial":
        return IntPolynomial.of(c * k for c in self.coeffs)

    def exact_divide(self, divisor: "IntPolynomial") -> "IntPolynomial | None":
        """Quotient self / divisor when the division is exact over the
        rationals and the quotient has integer coefficients; else None."""
        if divisor.degree > self.degree:
            return None
        rem = [Fraction(c) for c in self.coeffs]
        lead = Fraction(divisor.leading)
        quot = [Fraction(0)] * (self.degree - divisor.degree + 1)
        for k in range(len(quot) - 1, -1, -1):
            q = rem[divisor.degree + k] / lead
            quot[k] = q
            if q:
                for i, c in enumerate(divisor.coeffs):
                    rem[i + k] -= q * c
        if any(rem):
            return None
        if any(q.denominator != 1 for q in quot):
            return None
        return IntPolynomial.of(q.numerator for q in quot)

    def shifted(self, alpha: Fraction) -> tuple[Fraction, ...]:
        """Coefficients of self(y + alpha) as exact rationals,
        constant term first."""
        out = [Fraction(0)] * len(self.coeffs)
        for c in reversed(self.coeffs):
            carry = Fraction(c)
            for k in range(len(out) - 1, 0, -1):
                out[k] = out[k] * alpha + out[k - 1]
            out[0] = out[0] * alpha + carry
        return tuple(out)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.degree, self.coeffs)

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __str__(self) -> str:
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else ("+" if parts else "")
            mag = abs(c)
            if k == 0:
                term = f"{mag}"
            else:
                base = "x" if k == 1 else f"x^{k}"
                term = base if mag == 1 else f"{mag}*{base}"
            parts.append(f"{sign}{term}" if not parts else f" {sign} {term}")
        return "".join(parts) if parts else "0"


def rational_nth_power_root(x: Fraction, q: int) -> Fraction | None:
    """A rational r with r**q == x, or None.

    Even q requires x > 0 and returns the positive root; odd q preserves
    the sign of x.
    """
    if x == 0:
        return Fraction(0)
    sign = 1
    if x < 0:
        if q % 2 == 0:
            return None
        sign = -1
        x = -x
    rn, num_ok = integer_nth_root(x.numerator, q)
    rd, den_ok = integer_nth_root(x.denominator, q)
    if not (num_ok and den_ok):
        return None
    return Fraction(sign * rn, rd)


def capelli_irreducible(n: int, beta: Union[int, Fraction]) -> bool:
    """Vahlen-Capelli test: x**n - beta is irreducible over Q if and only
    if beta is not a q-th power in Q for any prime q dividing n, and, when
    4 | n, beta is not of the form -4*c**4."""
    beta = Fraction(beta)
    if n < 1:
        raise InputError(f"degree must be positive, got {n}")
    if beta == 0:
        raise InputError("base must be nonzero")
    if n == 1:
        return True
    for q in factorize(n):
        if rational_nth_power_root(beta, q) is not None:
            return False
    if n % 4 == 0 and beta < 0:
        if rational_nth_power_root(-beta / 4, 4) is not None:
            return False
    return True


@lru_cache(maxsize=4096)
def _factor_binomial_cached(n: int, numerator: int, denominator: int) -> tuple[tuple[int, ...], ...]:
    return tuple(factor_primitive_binomial(n, numerator, denominator))


def factor_binomial(n: int, beta: Union[int, Fraction]) -> list[IntPolynomial]:
    """Complete irreducible factorization over Q of the primitive integer
    model of x**n - beta, in (degree, coefficients) order.

    x**n - beta is separable for beta != 0, so no square-free step is
    needed.  The engine factors modulo a probed odd prime, Hensel-lifts
    past the coefficient bound, and recombines subsets; cheap certificates
    settle the (common) irreducible case without any lifting.  Degrees
    above 256 raise ResourceError.
    """
    beta = Fraction(beta)
    if n < 1:
        raise InputError(f"degree must be positive, got {n}")
    if beta == 0:
        raise InputError("base must be nonzero")
    if n > MAX_FACTOR_DEGREE:
        raise ResourceError(f"factorization limited to degree {MAX_FACTOR_DEGREE}, got {n}")
    model = IntPolynomial.binomial_model(n, beta)
    factors = [
        IntPolynomial.of(coeffs)
        for coeffs in _factor_binomial_cached(n, beta.numerator, beta.denominator)
    ]
    product = factors[0]
    for f in factors[1:]:
        product = product * f
    if product.coeffs != model.coeffs:
        raise CertificationError("factor product does not reconstruct the model")
    return factors


def _round_candidate(monic_coeffs: Sequence[mp.mpc], lead: int) -> IntPolynomial | None:
    ints = []
    threshold = mp.mpf(2) ** (-_ORACLE_PRECISION // 4)
    for c in monic_coeffs:
        scaled = c * lead
        if abs(mp.im(scaled)) > threshold:
            return None
        nearest = int(mp.nint(mp.re(scaled)))
        if abs(mp.re(scaled) - nearest) > threshold:
            return None
        ints.append(nearest)
    if ints[-1] == 0:
        return None
    poly = IntPolynomial.of(ints)
    c = poly.content()
    if c > 1:
        poly = IntPolynomial.of(v // c for v in poly.coeffs)
    return poly


def subset_factor_oracle(n: int, beta: Union[int, Fraction]) -> list[IntPolynomial]:
    """Brute-force factorization of the primitive model of x**n - beta,
    for n <= 16.

    Enumerates subsets of the embedded roots in ascending size, forms the
    monic product at 256-bit precision, rounds coefficients to rationals
    with denominator dividing the leading coefficient, and keeps a subset
    only when exact integer division certifies it.  Found factors are
    peeled off, so the returned factors are minimal, hence irreducible.
    """
    beta = Fraction(beta)
    if n > ORACLE_MAX_DEGREE:
        raise ResourceError(f"oracle limited to degree {ORACLE_MAX_DEGREE}, got {n}")
    if n < 1 or beta == 0:
        raise InputError("need n >= 1 and nonzero base")
    model = IntPolynomial.binomial_model(n, beta)
    lead = model.leading

    with mp.workprec(_ORACLE_PRECISION):
        roots = [embed(pt, _ORACLE_PRECISION) for pt in _level_points(beta, n)]
    roots_f = [complex(r) for r in roots]

    remaining = list(range(n))
    cofactor = model
    found: list[IntPolynomial] = []

    def try_subset(subset: tuple[int, ...]) -> IntPolynomial | None:
        # Cheap double-precision screens on the two extreme coefficients.
        prod = 1 + 0j
        tot = 0 + 0j
        for i in subset:
            prod *= roots_f[i]
            tot += roots_f[i]
        sign = -1 if len(subset) % 2 else 1
        for value in (sign * prod * lead, -tot * lead):
            if abs(value.imag) > 0.01 or abs(value.real - round(value.real)) > 0.01:
                return None
        with mp.workprec(_ORACLE_PRECISION):
            monic = [mp.mpc(1)]
            for i in subset:
                monic = [mp.mpc(0)] + monic
                for k in range(len(monic) - 1):
                    monic[k] -= roots[i] * monic[k + 1]
            candidate = _round_candidate(monic, lead)
        if candidate is None or candidate.degree != len(subset):
            return None
        if cofactor.exact_divide(candidate) is None:
            return None
        return candidate

    k = 1
    while remaining and k <= len(remaining) // 2:
        progressed = False
        for subset in combinations(tuple(remaining), k):
            candidate = try_subset(subset)
            if candidate is None:
                continue
            quotient = cofactor.exact_divide(candidate)
            assert quotient is not None
            found.append(candidate)
            cofactor = quotient
            for i in subset:
                remaining.remove(i)
            progressed = True
            break
        if not progressed:
            k += 1
    if remaining:
        found.append(cofactor)
    found.sort(key=IntPolynomial.sort_key)
    return found


def _level_points(beta: Fraction, n: int) -> list[RadicalPoint]:
    return [RadicalPoint(beta, n, j) for j in range(n)]


@dataclass(frozen=True)
class OrbitClass:
    """One Galois orbit inside a level: its minimal polynomial and the
    indices of the points it contains."""

    factor: IntPolynomial
    indices: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class GaloisOrbitPartition:
    level: OrbitLevel
    classes: tuple[OrbitClass, ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(sorted(c.size for c in self.classes))

    def class_of_index(self, j: int) -> OrbitClass:
        for c in self.classes:
            if j in c.indices:
                return c
        raise InputError(f"index {j} outside the level")

    def to_json(self) -> dict:
        return {
            "beta": f"{self.level.beta.numerator}/{self.level.beta.denominator}",
            "n": self.level.n,
            "classes": [
                {"factor": c.factor.to_json(), "indices": sorted(c.indices)}
                for c in self.classes
            ],
        }


def _assign_indices(
    level: OrbitLevel, factors: list[IntPolynomial], precision: int
) -> list[frozenset[int]] | None:
    accept = mp.mpf(2) ** (-precision // 2)
    reject = mp.mpf(2) ** (-precision // 4)
    groups: list[set[int]] = [set() for _ in factors]
    with mp.workprec(precision):
        for j, pt in enumerate(level.points):
            z = embed(pt, precision)
            values = [abs(f(z)) for f in factors]
            order = sorted(range(len(factors)), key=lambda i: values[i])
            best = order[0]
            if values[best] > accept:
                return None
            if len(factors) > 1 and values[order[1]] < reject:
                return None
            groups[best].add(j)
    for f, g in zip(factors, groups):
        if len(g) != f.degree:
            return None
    return [frozenset(g) for g in groups]


def _certify_class(
    level: OrbitLevel, factor: IntPolynomial, indices: frozenset[int], precision: int
) -> bool:
    # Reconstruct the monic polynomial from the class's roots and compare,
    # after scaling by the leading coefficient, with the integer factor.
    residue = mp.mpf(2) ** (-precision // 4)
    with mp.workprec(precision):
        monic = [mp.mpc(1)]
        for j in sorted(indices):
            root = embed(level.points[j], precision)
            monic = [mp.mpc(0)] + monic
            for k in range(len(monic) - 1):
                monic[k] -= root * monic[k + 1]
        lead = factor.leading
        for k, c in enumerate(monic):
            scaled = c * lead
            if abs(mp.im(scaled)) > residue:
                return False
            nearest = int(mp.nint(mp.re(scaled)))
            if abs(mp.re(scaled) - nearest) > residue:
                return False
            if nearest != factor.coeffs[k]:
                return False
    return True


def galois_orbits(level: OrbitLevel) -> GaloisOrbitPartition:
    """Partition a level into Galois orbits over Q.

    Each index is assigned to the unique irreducible factor vanishing at
    its embedded value, and every class is certified by reconstructing its
    monic polynomial from the roots and matching the integer factor
    exactly.  On certification failure the whole computation retries at
    doubled precision before giving up.
    """
    factors = factor_binomial(level.n, level.beta)
    precision = max(128, 4 * level.n + 64)
    while precision <= 1 << 14:
        groups = _assign_indices(level, factors, precision)
        if groups is not None and all(
            _certify_class(level, f, g, precision) for f, g in zip(factors, groups)
        ):
            classes = tuple(
                OrbitClass(factor=f, indices=g) for f, g in zip(factors, groups)
            )
            return GaloisOrbitPartition(level=level, classes=classes)
        precision *= 2
    raise CertificationError(
        f"could not certify the orbit partition of x**{level.n} - {level.beta} "
        f"even at {precision // 2} bits"
    )


@dataclass(frozen=True)
class DegreeBoundReport:
    beta: Fraction
    n: int
    min_orbit_size: int
    threshold: int
    satisfied: bool

    def to_json(self) -> dict:
        return {
            "beta": f"{self.beta.numerator}/{self.beta.denominator}",
            "n": self.n,
            "min_orbit_size": self.min_orbit_size,
            "sqrt_threshold": self.threshold,
            "satisfied": self.satisfied,
        }


def degree_bound_report(beta: Union[int, Fraction], n: int) -> DegreeBoundReport:
    """Compare the smallest Galois orbit of x**n = beta against the
    ceil(sqrt(n)) degree threshold (base field Q).

    Requires beta neither zero nor a root of unity, i.e. beta not in
    {0, 1, -1} over the rationals.
    """
    beta = Fraction(beta)
    if beta in (0, 1, -1):
        raise InputError("degree bound requires beta neither zero nor a root of unity")
    factors = factor_binomial(n, beta)
    min_size = min(f.degree for f in factors)
    root, exact = integer_nth_root(n, 2)
    threshold = root if exact else root + 1
    return DegreeBoundReport(
        beta=beta,
        n=n,
        min_orbit_size=min_size,
        threshold=threshold,
        satisfied=min_size >= threshold,
    )


def phi_consistency_report(partition: GaloisOrbitPartition) -> list[str]:
    """Check that the class through a primitive phase index has size at
    least totient(n)/2 for positive bases.

    Violations are reported (and logged), never asserted: the underlying
    degree argument is not airtight for every root, so small-n exceptions
    are flagged for inspection instead of failing.
    """
    level = partition.level
    if level.beta <= 0 or level.n == 1:
        return []
    violations = []
    bound = Fraction(euler_totient(level.n), 2)
    for j in range(level.n):
        if gcd(j, level.n) == 1:
            size = partition.class_of_index(j).size
            if size < bound:
                message = (
                    f"primitive index {j} of x**{level.n} = {level.beta} lies in a "
                    f"class of size {size} < totient/2 = {bound}"
                )
                logger.warning(message)
                violations.append(message)
    return violations
