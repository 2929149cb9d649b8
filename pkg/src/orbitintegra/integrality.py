"""S-integrality of Galois orbits of backward-orbit points relative to a
rational base point.

A point is S-integral relative to alpha when, at every place outside S,
no conjugate of the point meets any conjugate of alpha: where alpha is a
local integer the conjugates must stay at distance >= 1 from it, and where
alpha is not, the conjugates themselves must be local integers.  For a
Galois class named by an irreducible factor F, both conditions read off
Newton polygons (of F shifted by alpha, and of F itself), so every verdict
is exact and depends only on the class, never on a root choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from .arith import Place, padic_valuation
from .binomial import OrbitClass
from .errors import DegenerateInputError, InputError, UnsupportedInputError
from .padic import distance_profile, newton_polygon
from .primes import factorize, is_prime, primes_below

__all__ = [
    "Witness",
    "SIntegralityReport",
    "normalize_place_set",
    "candidate_primes",
    "is_s_integral",
    "full_level_s_integrality",
]


@dataclass(frozen=True)
class Witness:
    """A prime outside S together with the offending root valuation."""

    prime: int
    valuation: Fraction

    def to_json(self) -> list:
        return [self.prime, f"{self.valuation.numerator}/{self.valuation.denominator}"]


@dataclass(frozen=True)
class SIntegralityReport:
    class_size: int
    s_primes: tuple[int, ...]
    verdict: bool
    witnesses: tuple[Witness, ...]
    checked_primes: tuple[int, ...]
    # Set when the verdict is negative because of a huge composite factor
    # of alpha**n - beta whose prime witnesses were not cheaply nameable.
    unfactored_cofactor: int | None = None

    def to_json(self) -> dict:
        return {
            "class_size": self.class_size,
            "S": ["inf", *self.s_primes],
            "verdict": self.verdict,
            "witnesses": [w.to_json() for w in self.witnesses],
            "checked_primes": list(self.checked_primes),
            "unfactored_cofactor": (
                str(self.unfactored_cofactor) if self.unfactored_cofactor else None
            ),
        }


def normalize_place_set(S: Iterable[Union[Place, int]]) -> tuple[int, ...]:
    """Validate an S-set: must contain the archimedean place; returns the
    finite primes, sorted."""
    has_infinity = False
    primes: set[int] = set()
    for place in S:
        if isinstance(place, Place):
            if place.is_finite:
                primes.add(place.prime)
            else:
                has_infinity = True
        elif place in ("inf", None):
            has_infinity = True
        else:
            p = int(place)
            if not is_prime(p):
                raise InputError(f"S may contain only primes, got {p}")
            primes.add(p)
    if not has_infinity:
        raise InputError("S must contain the archimedean place")
    return tuple(sorted(primes))


def candidate_primes(
    alpha: Union[int, Fraction], beta: Union[int, Fraction], n: int
) -> frozenset[int]:
    """The finite set of primes where either integrality condition could
    fail: divisors of den(alpha), num(beta), den(beta), and of the
    numerator or denominator of alpha**n - beta.

    At every other prime all the relevant valuations vanish, so both
    conditions hold automatically.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if beta == 0:
        raise InputError("beta must be nonzero")
    resultant = alpha ** n - beta
    if resultant == 0:
        raise DegenerateInputError("alpha**n = beta is degenerate")
    primes: set[int] = set()
    primes.update(factorize(alpha.denominator))
    primes.update(factorize(abs(beta.numerator)))
    primes.update(factorize(beta.denominator))
    primes.update(factorize(abs(resultant.numerator)))
    primes.update(factorize(resultant.denominator))
    return frozenset(primes)


def _class_conditions_at_prime(
    orbit_class: OrbitClass, alpha: Fraction, p: int
) -> Fraction | None:
    """The offending valuation at p for this class, or None if the
    integrality conditions hold there."""
    factor = orbit_class.factor
    v_alpha = padic_valuation(alpha, p) if alpha != 0 else 0
    if v_alpha >= 0:
        # Need |gamma - alpha|_p >= 1 for every root gamma: all root
        # valuations of F(y + alpha) must be <= 0.
        shifted = factor.shifted(alpha)
        if shifted[0] == 0:
            raise DegenerateInputError("alpha is a root of the class polynomial")
        profile = newton_polygon(shifted, p).root_valuations()
        offending = [w for w in profile if w > 0]
        return max(offending) if offending else None
    # alpha is not a local integer: need |gamma|_p <= 1, i.e. all root
    # valuations of F itself >= 0.
    profile = newton_polygon(list(factor.coeffs), p).root_valuations()
    offending = [w for w in profile if w < 0]
    return min(offending) if offending else None


def is_s_integral(
    orbit_class: OrbitClass,
    alpha: Union[int, Fraction],
    S: Iterable[Union[Place, int]],
) -> SIntegralityReport:
    """Decide S-integrality of one Galois class relative to rational alpha.

    S must contain the archimedean place; every candidate prime outside S
    is checked through the class's Newton polygons.
    """
    if not isinstance(alpha, (int, Fraction)):
        raise UnsupportedInputError(
            "integrality decisions support rational alpha only"
        )
    alpha = Fraction(alpha)
    s_primes = normalize_place_set(S)
    factor = orbit_class.factor

    relevant: set[int] = set()
    relevant.update(factorize(alpha.denominator))
    relevant.update(factorize(abs(factor.coeffs[0])))
    relevant.update(factorize(abs(factor.leading)))
    value = Fraction(factor(alpha))
    if value == 0:
        raise DegenerateInputError("alpha is a root of the class polynomial")
    relevant.update(factorize(abs(value.numerator)))
    relevant.update(factorize(value.denominator))

    checked = tuple(sorted(p for p in relevant if p not in s_primes))
    witnesses: list[Witness] = []
    for p in checked:
        offending = _class_conditions_at_prime(orbit_class, alpha, p)
        if offending is not None:
            witnesses.append(Witness(prime=p, valuation=offending))
    return SIntegralityReport(
        class_size=orbit_class.size,
        s_primes=s_primes,
        verdict=not witnesses,
        witnesses=tuple(witnesses),
        checked_primes=checked,
    )


def _adaptive_trial_bound(n: int) -> int:
    bits = n.bit_length()
    if bits <= 256:
        return 1_000_000
    if bits <= 4096:
        return 100_000
    return 10_000


def full_level_s_integrality(
    alpha: Union[int, Fraction],
    beta: Union[int, Fraction],
    n: int,
    S: Iterable[Union[Place, int]],
) -> SIntegralityReport:
    """S-integrality of a full irreducible level x**n = beta, at any n.

    For a level forming a single Galois class the conditions collapse to
    exact divisibility statements: at primes not dividing den(alpha), the
    class fails exactly when p divides alpha**n - beta; at primes dividing
    den(alpha), it fails exactly when p also divides den(beta).  This
    avoids factoring alpha**n - beta: only the cofactor left after
    removing the known primes matters, and witness primes are extracted
    from it by bounded trial division (an unfactored remainder is reported
    as such).
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if beta == 0:
        raise InputError("beta must be nonzero")
    s_primes = normalize_place_set(S)
    resultant = alpha ** n - beta
    if resultant == 0:
        raise DegenerateInputError("alpha**n = beta is degenerate")

    witnesses: list[Witness] = []
    checked: set[int] = set()

    # Primes where alpha is not a local integer: condition |gamma|_p <= 1,
    # i.e. v_p(beta) >= 0.
    denominator_primes = set(factorize(alpha.denominator))
    for p in sorted(denominator_primes - set(s_primes)):
        checked.add(p)
        v_beta = padic_valuation(beta, p)
        if v_beta < 0:
            witnesses.append(Witness(prime=p, valuation=Fraction(v_beta, n)))

    # Where alpha is a local integer the class fails exactly when p divides
    # the numerator of alpha**n - beta (the profile then has a positive
    # entry).  Strip the small structural primes first; whatever cofactor
    # survives is divisible only by primes outside S, each certifying
    # non-integrality.
    numerator = abs(resultant.numerator)
    structural: set[int] = set(denominator_primes)
    structural.update(factorize(abs(beta.numerator)))
    structural.update(factorize(beta.denominator))
    structural.update(s_primes)
    for p in sorted(structural):
        if numerator % p == 0:
            while numerator % p == 0:
                numerator //= p
            if p in s_primes or p in denominator_primes:
                continue
            checked.add(p)
            witnesses.append(
                Witness(prime=p, valuation=_closest_entry(alpha, beta, n, p))
            )
        elif p not in s_primes and p not in checked:
            checked.add(p)

    unfactored: int | None = None
    if numerator > 1:
        # Not integral; hunt for nameable witness primes in the cofactor.
        remainder = numerator
        for p in primes_below(_adaptive_trial_bound(numerator)):
            if remainder % p == 0:
                while remainder % p == 0:
                    remainder //= p
                checked.add(p)
                witnesses.append(
                    Witness(prime=p, valuation=_closest_entry(alpha, beta, n, p))
                )
                if remainder == 1:
                    break
        if remainder > 1:
            if is_prime(remainder):
                checked.add(remainder)
                witnesses.append(
                    Witness(
                        prime=remainder,
                        valuation=_closest_entry(alpha, beta, n, remainder),
                    )
                )
            elif remainder.bit_length() <= 128:
                for p in sorted(factorize(remainder)):
                    checked.add(p)
                    witnesses.append(
                        Witness(prime=p, valuation=_closest_entry(alpha, beta, n, p))
                    )
            else:
                unfactored = remainder

    verdict = not witnesses and unfactored is None
    return SIntegralityReport(
        class_size=n,
        s_primes=s_primes,
        verdict=verdict,
        witnesses=tuple(witnesses),
        checked_primes=tuple(sorted(checked)),
        unfactored_cofactor=unfactored,
    )


def _closest_entry(alpha: Fraction, beta: Fraction, n: int, p: int) -> Fraction:
    """Largest valuation in the level's distance profile at p (the
    offending entry certifying non-integrality)."""
    # Common fast case: alpha a p-unit and p coprime to n puts the hull's
    # first vertex at (1, 0), so the largest entry is v_p(alpha**n - beta).
    if n % p != 0 and alpha != 0 and padic_valuation(alpha, p) == 0:
        return Fraction(padic_valuation(alpha ** n - beta, p))
    return max(distance_profile(alpha, beta, n, p))
