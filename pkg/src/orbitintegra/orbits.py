"""Backward-orbit points of the power map z -> z**d.

A level-m preimage of a nonzero rational beta is a solution of
``x**n = beta`` with ``n = d**m``.  Points are kept symbolic: the positive
real n-th root of |beta| times a root of unity, with the sign of beta
folded into a phase offset of 1/2.  This keeps every point exact, makes
indices canonical, and lets heights and valuations be computed without any
floating-point step.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath as mp

from .arith import LogValue, default_precision, padic_valuation, weil_height
from .errors import DomainError, InputError, ResourceError
from .primes import integer_nth_root

__all__ = ["RadicalPoint", "OrbitLevel", "preimages", "embed", "point_height", "level_valuation"]

MAX_LEVEL_SIZE = 1 << 20


@dataclass(frozen=True)
class RadicalPoint:
    """One solution of x**n = beta: ``|beta|**(1/n) * exp(2*pi*i*(j+t)/n)``
    where t = 0 for beta > 0 and t = 1/2 for beta < 0."""

    beta: Fraction
    n: int
    j: int

    def __post_init__(self) -> None:
        if self.beta == 0:
            raise DomainError("radical points require a nonzero base")
        if self.n < 1:
            raise InputError(f"root order must be positive, got {self.n}")
        if not 0 <= self.j < self.n:
            raise InputError(f"index {self.j} outside [0, {self.n})")

    @property
    def phase_offset(self) -> Fraction:
        return Fraction(0) if self.beta > 0 else Fraction(1, 2)

    @property
    def phase(self) -> Fraction:
        """Argument of the point divided by 2*pi, in [0, 1)."""
        return Fraction(self.j + self.phase_offset, self.n) % 1

    def as_rational(self) -> Fraction | None:
        """The exact rational value of this point, or None if irrational."""
        if self.phase == 0:
            sign = 1
        elif self.phase == Fraction(1, 2):
            sign = -1
        else:
            return None
        mag = abs(self.beta)
        rn, num_exact = integer_nth_root(mag.numerator, self.n)
        rd, den_exact = integer_nth_root(mag.denominator, self.n)
        if not (num_exact and den_exact):
            return None
        return Fraction(sign * rn, rd)

    def to_complex(self, precision: int | None = None) -> mp.mpc:
        return embed(self, precision)

    def to_json(self) -> dict:
        return {
            "beta": f"{self.beta.numerator}/{self.beta.denominator}",
            "n": self.n,
            "j": self.j,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RadicalPoint":
        return cls(Fraction(data["beta"]), int(data["n"]), int(data["j"]))


@dataclass(frozen=True)
class OrbitLevel:
    """All d**m preimages of beta at depth m, in canonical index order."""

    beta: Fraction
    d: int
    depth: int
    points: tuple[RadicalPoint, ...]

    @property
    def n(self) -> int:
        return self.d ** self.depth

    def __len__(self) -> int:
        return len(self.points)


def preimages(beta: Union[int, Fraction], d: int, m: int) -> OrbitLevel:
    """The full set of solutions of x**(d**m) = beta.

    Raises InputError for d < 2 or m < 0 and ResourceError when the level
    would exceed 2**20 points.
    """
    beta = Fraction(beta)
    if beta == 0:
        raise DomainError("backward orbits of 0 are degenerate")
    if d < 2:
        raise InputError(f"map degree must be >= 2, got {d}")
    if m < 0:
        raise InputError(f"depth must be >= 0, got {m}")
    n = d ** m
    if n > MAX_LEVEL_SIZE:
        raise ResourceError(f"level size {d}**{m} exceeds the {MAX_LEVEL_SIZE} ceiling")
    points = tuple(RadicalPoint(beta, n, j) for j in range(n))
    return OrbitLevel(beta=beta, d=d, depth=m, points=points)


def embed(pt: RadicalPoint, precision: int | None = None) -> mp.mpc:
    """Complex value of the point at the given precision in bits.

    Deterministic at fixed precision; relative error stays well below
    2**-(precision-8).
    """
    bits = precision if precision is not None else default_precision()
    if bits < 64:
        raise InputError(f"embedding precision must be >= 64 bits, got {bits}")
    mag = abs(pt.beta)
    with mp.workprec(bits + 16):
        r = mp.root(mp.mpf(mag.numerator), pt.n) / mp.root(mp.mpf(mag.denominator), pt.n)
        ang = 2 * pt.phase  # multiples of pi
        z = r * mp.expjpi(mp.mpf(ang.numerator) / ang.denominator) if ang else mp.mpc(r)
    with mp.workprec(bits):
        return +z


def point_height(pt: RadicalPoint) -> LogValue:
    """Weil height of the point: h(beta)/n, exactly.

    For the power map the canonical height coincides with the Weil height,
    and x**n = beta forces h(x) = h(beta)/n.
    """
    return weil_height(pt.beta) * Fraction(1, pt.n)


def level_valuation(beta: Union[int, Fraction], n: int, p: int) -> Fraction:
    """Common p-adic valuation v_p(beta)/n shared by all n roots.

    The Newton polygon of x**n - beta at p is a single segment from
    (0, v_p(beta)) to (n, 0), so every root valuation equals its slope.
    """
    beta = Fraction(beta)
    if beta == 0:
        raise DomainError("valuation of 0 undefined")
    if n < 1:
        raise InputError(f"root order must be positive, got {n}")
    return Fraction(padic_valuation(beta, p), n)
