"""Places of the rationals, exact logarithmic values, and Weil heights.

The base field is fixed to the rationals, so every place is either the
archimedean absolute value or the p-adic absolute value normalized by
``|p|_p = 1/p``, and all normalization weights equal one.  Rational numbers
are plain :class:`fractions.Fraction` values, which already maintain the
lowest-terms invariant this module relies on.

The workhorse type is :class:`LogValue`, a formal rational-linear
combination of logarithms of primes.  Because logarithms of distinct primes
are linearly independent over the rationals, equality of canonical forms is
exact equality of the underlying real numbers, which lets global identities
(the product formula, height identities, the pairing identity) be verified
by symbolic cancellation instead of floating-point tolerance.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

import mpmath as mp

from .errors import DomainError, InputError
from .primes import euler_totient, factorize, is_prime

__all__ = [
    "Rational",
    "Place",
    "LogValue",
    "ProductFormulaRecord",
    "default_precision",
    "padic_valuation",
    "log_abs",
    "log_rational",
    "log_plus",
    "weil_height",
    "product_formula_check",
    "euler_totient",
]

Rational = Fraction

_PRECISION_ENV = "ORBIT_INTEGRA_PRECISION"
_DEFAULT_PRECISION = 128


def default_precision() -> int:
    """Working precision in bits for archimedean evaluation.

    Defaults to 128 and may be overridden through the
    ``ORBIT_INTEGRA_PRECISION`` environment variable.
    """
    raw = os.environ.get(_PRECISION_ENV)
    if raw is None:
        return _DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError as exc:
        raise InputError(f"{_PRECISION_ENV} must be an integer, got {raw!r}") from exc
    if bits < 64:
        raise InputError(f"{_PRECISION_ENV} must be at least 64, got {bits}")
    return bits


@dataclass(frozen=True)
class Place:
    """A place of the rationals: archimedean, or finite above a prime.

    ``prime`` is None for the archimedean place.  Finite places insist on a
    proven prime, so a Place can be trusted as an index everywhere else.
    """

    prime: int | None = None

    def __post_init__(self) -> None:
        if self.prime is not None and not is_prime(self.prime):
            raise InputError(f"finite places require a prime, got {self.prime}")

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(p)

    @property
    def is_finite(self) -> bool:
        return self.prime is not None

    def sort_key(self) -> tuple[int, int]:
        # Archimedean place first, then finite places by prime.
        return (0, 0) if self.prime is None else (1, self.prime)

    def __str__(self) -> str:
        return "inf" if self.prime is None else str(self.prime)

    def to_json(self) -> Union[str, int]:
        return "inf" if self.prime is None else self.prime


_TermsLike = Union[Mapping[int, Fraction], Iterable[tuple[int, Fraction]], None]


class LogValue:
    """Finite formal sum ``sum q_p * log p`` over primes p, with exact
    rational coefficients.

    Composite keys are split through their prime factorization on
    insertion, so the stored form is canonical and two values are equal as
    real numbers if and only if their canonical forms coincide.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: _TermsLike = None):
        canonical: dict[int, Fraction] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for m, q in items:
                if m < 1:
                    raise InputError(f"LogValue keys must be >= 1, got {m}")
                q = Fraction(q)
                if m == 1 or q == 0:
                    continue
                if m in canonical:
                    canonical[m] += q
                elif is_prime(m):
                    canonical[m] = q
                else:
                    for p, e in factorize(m).items():
                        canonical[p] = canonical.get(p, Fraction(0)) + q * e
        object.__setattr__(
            self,
            "_terms",
            tuple(sorted((p, q) for p, q in canonical.items() if q != 0)),
        )

    @classmethod
    def _from_canonical(cls, terms: Iterable[tuple[int, Fraction]]) -> "LogValue":
        # Internal constructor for arithmetic results whose keys are
        # already prime: skips the canonicalization pass.
        value = cls.__new__(cls)
        object.__setattr__(value, "_terms", tuple(sorted((p, q) for p, q in terms if q)))
        return value

    @classmethod
    def zero(cls) -> "LogValue":
        return cls()

    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogValue):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __add__(self, other: "LogValue") -> "LogValue":
        if not isinstance(other, LogValue):
            return NotImplemented
        merged = dict(self._terms)
        for p, q in other._terms:
            merged[p] = merged.get(p, Fraction(0)) + q
        return LogValue._from_canonical(merged.items())

    def __sub__(self, other: "LogValue") -> "LogValue":
        if not isinstance(other, LogValue):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "LogValue":
        return LogValue._from_canonical((p, -q) for p, q in self._terms)

    def __mul__(self, scalar) -> "LogValue":
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        s = Fraction(scalar)
        return LogValue._from_canonical((p, q * s) for p, q in self._terms)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "LogValue":
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return self * (Fraction(1) / Fraction(scalar))

    def numeric(self, precision: int | None = None) -> mp.mpf:
        """Evaluate as a real number at the given precision in bits.

        Terms are summed in ascending prime order at fixed precision, so
        the result is reproducible bit for bit.
        """
        bits = precision if precision is not None else default_precision()
        with mp.workprec(bits):
            total = mp.mpf(0)
            for p, q in self._terms:
                total += mp.mpf(q.numerator) / q.denominator * mp.log(p)
            return +total

    def __float__(self) -> float:
        return float(self.numeric())

    def to_json(self) -> dict:
        return {"terms": [[p, f"{q.numerator}/{q.denominator}"] for p, q in self._terms]}

    @classmethod
    def from_json(cls, data: dict) -> "LogValue":
        return cls([(int(p), Fraction(q)) for p, q in data["terms"]])

    def __repr__(self) -> str:
        if not self._terms:
            return "LogValue(0)"
        parts = []
        for p, q in self._terms:
            coeff = str(q) if q.denominator != 1 else str(q.numerator)
            parts.append(f"{coeff}*log({p})")
        return "LogValue(" + " + ".join(parts) + ")"


def padic_valuation(x: Union[int, Fraction], p: int) -> int:
    """Exponent v with x = p**v * u and u a p-unit.

    Raises DomainError for x == 0 and InputError for composite p.
    """
    if not is_prime(p):
        raise InputError(f"padic_valuation requires a prime, got {p}")
    x = Fraction(x)
    if x == 0:
        raise DomainError("valuation of 0 undefined")
    v = 0
    num = abs(x.numerator)
    while num % p == 0:
        num //= p
        v += 1
    den = x.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


def log_rational(x: Union[int, Fraction]) -> LogValue:
    """Exact log of a positive rational, via factorization of both sides."""
    x = Fraction(x)
    if x <= 0:
        raise DomainError(f"log_rational requires a positive value, got {x}")
    return LogValue({x.numerator: Fraction(1)}) - LogValue({x.denominator: Fraction(1)})


def log_plus(x: Union[int, Fraction]) -> LogValue:
    """max(0, log|x|) as an exact LogValue; zero input gives zero."""
    x = abs(Fraction(x))
    if x <= 1:
        return LogValue.zero()
    return log_rational(x)


def log_abs(x: Union[int, Fraction], v: Place) -> LogValue:
    """log|x|_v as an exact LogValue.

    At a finite place above p this is ``-v_p(x) * log p``; at the
    archimedean place it is ``log|num| - log|den|`` through the prime
    factorizations of numerator and denominator.
    """
    x = Fraction(x)
    if x == 0:
        raise DomainError("log_abs of 0 undefined")
    if v.is_finite:
        val = padic_valuation(x, v.prime)
        return LogValue({v.prime: Fraction(-val)})
    return log_rational(abs(x))


@dataclass(frozen=True)
class ProductFormulaRecord:
    """Per-place contributions to sum_v log|x|_v, plus the exact total."""

    x: Fraction
    contributions: tuple[tuple[Place, LogValue], ...]
    total: LogValue

    @property
    def ok(self) -> bool:
        return self.total.is_zero()

    def to_json(self) -> dict:
        return {
            "x": f"{self.x.numerator}/{self.x.denominator}",
            "contributions": [
                [place.to_json(), value.to_json()] for place, value in self.contributions
            ],
            "total": self.total.to_json(),
            "ok": self.ok,
        }


def product_formula_check(x: Union[int, Fraction]) -> ProductFormulaRecord:
    """Verify sum over all places of log|x|_v cancels exactly.

    Only the archimedean place and the finitely many primes dividing
    numerator or denominator can contribute, so the sum is finite.  One
    factorization of numerator and denominator feeds every place:
    log|x|_inf expands along it, and the contribution at p is
    -v_p(x) * log p.
    """
    x = Fraction(x)
    if x == 0:
        raise DomainError("product formula undefined for 0")
    exponents: dict[int, int] = dict(factorize(abs(x.numerator)))
    for p, e in factorize(x.denominator).items():
        exponents[p] = exponents.get(p, 0) - e
    contributions: list[tuple[Place, LogValue]] = []
    total = LogValue.zero()
    inf_term = LogValue._from_canonical(
        (p, Fraction(e)) for p, e in exponents.items()
    )
    if not inf_term.is_zero():
        contributions.append((Place.infinity(), inf_term))
        total = total + inf_term
    for p in sorted(exponents):
        if exponents[p]:
            term = LogValue._from_canonical([(p, Fraction(-exponents[p]))])
            contributions.append((Place.finite(p), term))
            total = total + term
    return ProductFormulaRecord(x=x, contributions=tuple(contributions), total=total)


def weil_height(x: Union[int, Fraction]) -> LogValue:
    """Absolute logarithmic Weil height of a rational number,
    ``log max(|num|, den)``, as an exact LogValue."""
    x = Fraction(x)
    if x == 0:
        return LogValue.zero()
    return LogValue({max(abs(x.numerator), x.denominator): Fraction(1)})
