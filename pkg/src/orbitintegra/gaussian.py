"""Exact Gaussian-rational arithmetic for archimedean-side analyses.

Degree-two base points such as (3+4i)/5 only ever enter through the
archimedean place, so a small exact complex-rational type is enough: no
places of Q(i) are needed, just exact powers, exact |z|^2, and the Weil
height through the minimal polynomial over the integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath as mp

from .arith import LogValue, log_plus, log_rational, weil_height
from .errors import InputError

__all__ = ["GaussianRational", "gaussian_weil_height", "is_rational_preperiodic"]


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction

    @classmethod
    def of(cls, re, im=0) -> "GaussianRational":
        return cls(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __pow__(self, k: int) -> "GaussianRational":
        if k < 0:
            raise InputError("negative powers not supported")
        result = GaussianRational(Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|z|^2, exactly."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_rational(self) -> bool:
        return self.im == 0

    def to_mpc(self, precision: int = 128) -> mp.mpc:
        with mp.workprec(precision):
            return mp.mpc(
                mp.mpf(self.re.numerator) / self.re.denominator,
                mp.mpf(self.im.numerator) / self.im.denominator,
            )

    _TOKEN = re.compile(r"^([+-]?[0-9]+(?:/[0-9]+)?)?([+-](?:[0-9]+(?:/[0-9]+)?)?i)?$")

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse strings like '3/5+4/5i', '-2', 'i', '1-i'."""
        s = text.strip().replace(" ", "")
        if s in ("i", "+i"):
            return cls(Fraction(0), Fraction(1))
        if s == "-i":
            return cls(Fraction(0), Fraction(-1))
        if s.endswith("i") and ("+" not in s[1:] and "-" not in s[1:]):
            return cls(Fraction(0), Fraction(s[:-1]))
        match = cls._TOKEN.match(s)
        if not match or (match.group(1) is None and match.group(2) is None):
            raise InputError(f"cannot parse Gaussian rational {text!r}")
        re_part = Fraction(match.group(1)) if match.group(1) else Fraction(0)
        im_text = match.group(2)
        if im_text is None:
            im_part = Fraction(0)
        elif im_text in ("+i", "-i"):
            im_part = Fraction(1) if im_text == "+i" else Fraction(-1)
        else:
            im_part = Fraction(im_text[:-1])
        return cls(re_part, im_part)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def gaussian_weil_height(z: GaussianRational) -> LogValue:
    """Weil height of a Gaussian rational, exactly.

    For rational z this is the usual height.  Otherwise the minimal
    polynomial over Q is x^2 - 2*Re(z)*x + |z|^2; clearing denominators to
    a primitive integer polynomial with leading coefficient L, both roots
    share modulus |z|, so the Mahler measure is L * max(1, |z|)^2 and the
    height is (log L + max(0, log |z|^2)) / 2.
    """
    if z.is_rational:
        return weil_height(z.re)
    trace = 2 * z.re
    norm = z.abs2()
    lead = trace.denominator * norm.denominator // gcd(trace.denominator, norm.denominator)
    coeffs = (norm * lead, -trace * lead, Fraction(lead))
    content = 0
    for c in coeffs:
        content = gcd(content, abs(c.numerator))
    lead_primitive = lead // content
    height = log_rational(lead_primitive) + log_plus(norm)
    return height * Fraction(1, 2)


def is_rational_preperiodic(z) -> bool:
    """Whether a point is preperiodic for every power map z -> z**d.

    Preperiodic points are exactly 0 and the roots of unity (height zero);
    among rationals these are {0, 1, -1}, and among Gaussian rationals
    {0, 1, -1, i, -i}.
    """
    if isinstance(z, GaussianRational):
        if z.is_zero():
            return True
        return z.abs2() == 1 and (z.re == 0 or z.im == 0)
    return Fraction(z) in (0, 1, -1)
