"""Chordal metric, local height functions, truncated potentials, and the
closed-form constants attached to the truncation scale.

Local heights against the equilibrium measure of z -> z**d are evaluated
exactly wherever the place is finite (every value is a rational multiple of
log p) and in high-precision floating point at the archimedean place.
Single irrational roots do not carry Galois-well-defined p-adic distances,
so the finite-place primitives aggregate over a whole level or a whole
Galois class; that is the only shape any downstream formula consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import log, sqrt
from typing import Union

import mpmath as mp
import numpy as np

from .arith import (
    LogValue,
    Place,
    default_precision,
    log_plus,
    log_rational,
    padic_valuation,
)
from .binomial import IntPolynomial
from .errors import DegenerateInputError, InputError, UnsupportedInputError
from .gaussian import GaussianRational
from .orbits import RadicalPoint, embed
from .padic import newton_polygon

__all__ = [
    "LocalHeightValue",
    "TruncationConstants",
    "EquilibriumIntegral",
    "chordal_distance",
    "local_height",
    "truncated_local_height",
    "level_height_sum",
    "class_height_sum",
    "equilibrium_integral",
    "equilibrium_quadrature",
    "truncation_constants",
    "dirichlet_quadrature",
    "equidistribution_bound",
    "decay_envelope",
]

_RationalLike = Union[int, Fraction]
_PointLike = Union[RadicalPoint, int, Fraction, GaussianRational]


@dataclass(frozen=True)
class LocalHeightValue:
    """A local height: exact LogValue where representable, else a float
    with its working precision recorded."""

    place: Place
    exact: LogValue | None = None
    approx: float | None = None
    precision: int | None = None

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def value(self, precision: int | None = None) -> float:
        if self.exact is not None:
            return float(self.exact.numeric(precision))
        return float(self.approx)

    def to_json(self) -> dict:
        payload: dict = {"place": self.place.to_json(), "exact": self.is_exact}
        if self.exact is not None:
            payload["value"] = self.exact.to_json()
        else:
            payload["value"] = self.approx
            payload["precision"] = self.precision
        return payload


def _as_complex(value, precision: int) -> mp.mpc:
    if isinstance(value, RadicalPoint):
        return embed(value, precision)
    if isinstance(value, GaussianRational):
        return value.to_mpc(precision)
    value = Fraction(value)
    with mp.workprec(precision):
        return mp.mpc(mp.mpf(value.numerator) / value.denominator)


def _valuation_or_none(x: Fraction, p: int) -> int | None:
    return None if x == 0 else padic_valuation(x, p)


def chordal_distance(x, y, v: Place, precision: int | None = None):
    """Chordal metric on the projective line at the place v, with the
    sup-norm normalization in both coordinates.

    Points are homogeneous coordinate pairs.  Finite places give an exact
    Fraction (a power of 1/p, always in [0, 1] by the ultrametric
    inequality); the archimedean place gives a float at the requested
    precision.  The sup-norm form is the one whose negative logarithm
    expands to the local height log+|z| + log+|a| - log|z - a|; at the
    archimedean place it can exceed 1 (never 2).
    """
    x1, x2 = x
    y1, y2 = y
    if v.is_finite:
        x1, x2, y1, y2 = Fraction(x1), Fraction(x2), Fraction(y1), Fraction(y2)
        if x1 == 0 and x2 == 0 or y1 == 0 and y2 == 0:
            raise InputError("projective points need a nonzero coordinate")
        p = v.prime
        det = x1 * y2 - y1 * x2
        if det == 0:
            return Fraction(0)
        exponent = (
            padic_valuation(det, p)
            - min(w for w in (_valuation_or_none(x1, p), _valuation_or_none(x2, p)) if w is not None)
            - min(w for w in (_valuation_or_none(y1, p), _valuation_or_none(y2, p)) if w is not None)
        )
        assert exponent >= 0, "chordal distance exceeded 1 at a finite place"
        return Fraction(1, p ** exponent)
    bits = precision if precision is not None else default_precision()
    with mp.workprec(bits):
        cx1, cx2 = _as_complex(x1, bits), _as_complex(x2, bits)
        cy1, cy2 = _as_complex(y1, bits), _as_complex(y2, bits)
        if cx1 == 0 and cx2 == 0 or cy1 == 0 and cy2 == 0:
            raise InputError("projective points need a nonzero coordinate")
        det = abs(cx1 * cy2 - cy1 * cx2)
        scale = max(abs(cx1), abs(cx2)) * max(abs(cy1), abs(cy2))
        return +(det / scale)


def _finite_log_plus_point(z: _PointLike, p: int) -> Fraction:
    """Coefficient of log p in log+|z|_p."""
    if isinstance(z, RadicalPoint):
        v = Fraction(padic_valuation(z.beta, p), z.n)
    elif isinstance(z, GaussianRational):
        raise UnsupportedInputError("Gaussian points are archimedean-only")
    else:
        z = Fraction(z)
        if z == 0:
            return Fraction(0)
        v = Fraction(padic_valuation(z, p))
    return max(Fraction(0), -v)


def local_height(
    alpha,
    z: _PointLike,
    v: Place,
    precision: int | None = None,
    distance_valuation: Fraction | None = None,
) -> LocalHeightValue:
    """The local height of z against alpha at the place v:
    ``log+|z|_v + log+|alpha|_v - log|z - alpha|_v``.

    At a finite place the distance term needs v_p(z - alpha).  That is
    available exactly when z is rational; for an irrational radical point
    the caller supplies the valuation drawn from the class or level
    profile, because a single root's valuation is not Galois-determined.
    """
    if v.is_finite:
        if isinstance(alpha, GaussianRational):
            if not alpha.is_rational:
                raise UnsupportedInputError("finite places support rational alpha only")
            alpha = alpha.re
        alpha = Fraction(alpha)
        p = v.prime
        lp_z = _finite_log_plus_point(z, p)
        lp_a = max(Fraction(0), Fraction(-padic_valuation(alpha, p))) if alpha else Fraction(0)
        if distance_valuation is None:
            zr = z.as_rational() if isinstance(z, RadicalPoint) else Fraction(z)
            if zr is None:
                raise InputError(
                    "irrational point at a finite place: pass distance_valuation "
                    "from the class or level profile"
                )
            if zr == alpha:
                raise DegenerateInputError("local height has a pole at z = alpha")
            distance_valuation = Fraction(padic_valuation(zr - alpha, p))
        coeff = lp_z + lp_a + distance_valuation
        return LocalHeightValue(place=v, exact=LogValue({p: coeff}))

    bits = precision if precision is not None else default_precision()
    with mp.workprec(bits):
        zc = _as_complex(z, bits)
        ac = _as_complex(alpha, bits)
        dist = abs(zc - ac)
        if dist == 0 or dist < mp.mpf(2) ** (-bits + 8):
            raise DegenerateInputError("local height has a pole at z = alpha")
        value = (
            mp.log(max(mp.mpf(1), abs(zc)))
            + mp.log(max(mp.mpf(1), abs(ac)))
            - mp.log(dist)
        )
    return LocalHeightValue(place=v, approx=float(value), precision=bits)


def truncated_local_height(
    alpha,
    z: _PointLike,
    v: Place,
    tau,
    precision: int | None = None,
    distance_valuation: Fraction | None = None,
) -> LocalHeightValue:
    """Local height with the distance clamped below at tau, in (0, 1).

    Agrees with the untruncated value whenever |z - alpha|_v >= tau, and
    stays finite at z = alpha.
    """
    tau_f = Fraction(tau) if isinstance(tau, (int, Fraction, str)) else None
    tau_value = float(tau_f) if tau_f is not None else float(tau)
    if not 0 < tau_value < 1:
        raise InputError(f"truncation scale must lie in (0, 1), got {tau}")

    if v.is_finite:
        if isinstance(alpha, GaussianRational):
            if not alpha.is_rational:
                raise UnsupportedInputError("finite places support rational alpha only")
            alpha = alpha.re
        alpha = Fraction(alpha)
        p = v.prime
        lp_z = _finite_log_plus_point(z, p)
        lp_a = max(Fraction(0), Fraction(-padic_valuation(alpha, p))) if alpha else Fraction(0)
        if distance_valuation is None:
            zr = z.as_rational() if isinstance(z, RadicalPoint) else Fraction(z)
            if zr is None:
                raise InputError(
                    "irrational point at a finite place: pass distance_valuation"
                )
            distance_valuation = (
                None if zr == alpha else Fraction(padic_valuation(zr - alpha, p))
            )
        # |z - alpha|_p = p**-w; keep the plain height while p**-w >= tau.
        if distance_valuation is not None and not _padic_abs_below(
            distance_valuation, p, tau_f if tau_f is not None else Fraction(tau_value)
        ):
            coeff = lp_z + lp_a + distance_valuation
            return LocalHeightValue(place=v, exact=LogValue({p: coeff}))
        base = LogValue({p: lp_z + lp_a})
        if tau_f is not None:
            return LocalHeightValue(place=v, exact=base + log_rational(1 / tau_f))
        return LocalHeightValue(
            place=v, approx=float(base.numeric()) - log(tau_value), precision=None
        )

    bits = precision if precision is not None else default_precision()
    with mp.workprec(bits):
        zc = _as_complex(z, bits)
        ac = _as_complex(alpha, bits)
        dist = abs(zc - ac)
        value = (
            mp.log(max(mp.mpf(1), abs(zc)))
            + mp.log(max(mp.mpf(1), abs(ac)))
            - mp.log(max(mp.mpf(tau_value), dist))
        )
    return LocalHeightValue(place=v, approx=float(value), precision=bits)


def _padic_abs_below(w: Fraction, p: int, tau: Fraction) -> bool:
    """Whether p**-w < tau, exactly, for rational w and tau."""
    # p**-w < tau  <=>  tau**den * p**num > 1 with w = num/den, den > 0.
    num, den = w.numerator, w.denominator
    return Fraction(tau) ** den * Fraction(p) ** num > 1


def level_height_sum(
    alpha,
    beta: _RationalLike,
    n: int,
    v: Place,
    precision: int | None = None,
    exact_archimedean: bool = False,
) -> LocalHeightValue:
    """Sum of local heights over the full level x**n = beta, exactly at
    finite places.

    The distance part aggregates through the resultant: the product of
    (alpha - root) over the level is alpha**n - beta.  At the archimedean
    place the default is a float; with exact_archimedean=True the value is
    returned as an exact LogValue, which requires factoring alpha**n - beta.
    """
    beta = Fraction(beta)
    if beta == 0 or n < 1:
        raise InputError("need nonzero beta and n >= 1")

    if isinstance(alpha, GaussianRational) and alpha.is_rational:
        alpha = alpha.re
    if v.is_finite:
        if isinstance(alpha, GaussianRational):
            raise UnsupportedInputError("finite places support rational alpha only")
        alpha = Fraction(alpha)
        resultant = alpha ** n - beta
        if resultant == 0:
            raise DegenerateInputError("alpha**n = beta collapses the level sum")
        p = v.prime
        coeff = (
            max(Fraction(0), Fraction(-padic_valuation(beta, p)))
            + n * (max(Fraction(0), Fraction(-padic_valuation(alpha, p))) if alpha else Fraction(0))
            + padic_valuation(resultant, p)
        )
        return LocalHeightValue(place=v, exact=LogValue({p: coeff}))

    if isinstance(alpha, GaussianRational):
        resultant_abs2 = (alpha ** n - GaussianRational.of(beta)).abs2()
        if resultant_abs2 == 0:
            raise DegenerateInputError("alpha**n = beta collapses the level sum")
        if exact_archimedean:
            raise UnsupportedInputError("exact archimedean sums need rational alpha")
        bits = precision if precision is not None else default_precision()
        with mp.workprec(bits):
            log_resultant = mp.log(
                mp.mpf(resultant_abs2.numerator) / resultant_abs2.denominator
            ) / 2
            lp_alpha = mp.log(max(mp.mpf(1), mp.sqrt(mp.mpf(alpha.abs2().numerator) / alpha.abs2().denominator)))
            value = (
                float(log_plus(beta).numeric(bits)) + n * lp_alpha - log_resultant
            )
        return LocalHeightValue(place=v, approx=float(value), precision=bits)

    alpha = Fraction(alpha)
    resultant = alpha ** n - beta
    if resultant == 0:
        raise DegenerateInputError("alpha**n = beta collapses the level sum")
    if exact_archimedean:
        exact = log_plus(beta) + n * log_plus(alpha) - _log_abs_archimedean(resultant)
        return LocalHeightValue(place=v, exact=exact)
    bits = precision if precision is not None else default_precision()
    with mp.workprec(bits):
        value = (
            float(log_plus(beta).numeric(bits))
            + n * float(log_plus(alpha).numeric(bits))
            - float(_log_abs_float(resultant, bits))
        )
    return LocalHeightValue(place=v, approx=value, precision=bits)


def _log_abs_archimedean(x: Fraction) -> LogValue:
    return log_rational(abs(x))


def _log_abs_float(x: Fraction, bits: int) -> mp.mpf:
    with mp.workprec(bits):
        return mp.log(mp.mpf(abs(x.numerator))) - mp.log(mp.mpf(x.denominator))


def class_height_sum(factor: IntPolynomial, alpha: _RationalLike, p: int) -> LocalHeightValue:
    """Exact sum of local heights over one Galois class at a finite place.

    The class is named by its irreducible integer factor F: the log+ part
    comes from F's Newton polygon, and the distance part from
    prod(alpha - gamma) = F(alpha)/lc(F).
    """
    alpha = Fraction(alpha)
    polygon = newton_polygon(list(factor.coeffs), p)
    lp_roots = sum(
        (max(Fraction(0), -w) * mult for w, mult in polygon.segments), Fraction(0)
    )
    value_at_alpha = Fraction(factor(alpha))
    if value_at_alpha == 0:
        raise DegenerateInputError("alpha is a root of the class polynomial")
    coeff = (
        lp_roots
        + factor.degree * (max(Fraction(0), Fraction(-padic_valuation(alpha, p))) if alpha else Fraction(0))
        + padic_valuation(value_at_alpha, p)
        - padic_valuation(factor.leading, p)
    )
    return LocalHeightValue(place=Place.finite(p), exact=LogValue({p: coeff}))


@dataclass(frozen=True)
class EquilibriumIntegral:
    """Integral of a local height against the equilibrium measure of the
    power map, with the derivation that produced it."""

    place: Place
    value: LogValue
    derivation: str


def equilibrium_integral(alpha, v: Place) -> EquilibriumIntegral:
    """Integral of the local height of alpha against the equilibrium
    measure of z -> z**d: exactly zero at every place.

    Archimedean: the measure is the uniform probability measure on the
    unit circle, and the circle mean of log|z - alpha| equals
    log+|alpha| (Jensen), cancelling the log+|alpha| term.  Finite: the
    measure sits at the Gauss point, where log of the sup-norm of
    (z - alpha) on the unit disc is log max(1, |alpha|_p), cancelling the
    same term.
    """
    if v.is_finite:
        return EquilibriumIntegral(
            place=v, value=LogValue.zero(), derivation="gauss-point-evaluation"
        )
    return EquilibriumIntegral(
        place=v, value=LogValue.zero(), derivation="jensen-circle-mean"
    )


def equilibrium_quadrature(alpha, dps: int = 30) -> float:
    """Circle-mean of the local height of alpha, by adaptive quadrature.

    Numeric cross-check of the Jensen evaluation: the result should vanish
    to quadrature accuracy for every alpha off the pole locus.  When alpha
    sits on the unit circle the integrand has a logarithmic singularity,
    which is handled by splitting the circle at the singular angle.
    """
    with mp.workdps(dps):
        if isinstance(alpha, GaussianRational):
            a = alpha.to_mpc(mp.mp.prec)
        else:
            alpha = Fraction(alpha)
            a = mp.mpc(mp.mpf(alpha.numerator) / alpha.denominator)
        lp = mp.log(max(mp.mpf(1), abs(a)))

        def integrand(theta):
            return mp.log(abs(mp.expj(theta) - a))

        points = [0, 2 * mp.pi]
        if abs(abs(a) - 1) < mp.mpf("0.25") and abs(a) > 0:
            theta0 = mp.arg(a) % (2 * mp.pi)
            points = sorted({mp.mpf(0), theta0, 2 * mp.pi})
        integral = mp.quad(integrand, points)
        return float(lp - integral / (2 * mp.pi))


@dataclass(frozen=True)
class TruncationConstants:
    """Closed-form Lipschitz constant and Dirichlet energy of the
    truncated local height at scale tau."""

    place: Place
    lipschitz: Fraction | int
    dirichlet: float
    dirichlet_exact: LogValue | None = None

    def to_json(self) -> dict:
        return {
            "place": self.place.to_json(),
            "lipschitz": str(self.lipschitz),
            "dirichlet": self.dirichlet,
            "dirichlet_exact": None
            if self.dirichlet_exact is None
            else self.dirichlet_exact.to_json(),
        }


def truncation_constants(tau, v: Place) -> TruncationConstants:
    """Archimedean: Lipschitz constant 1 + 1/tau and Dirichlet energy
    -4*pi*log(tau).  Non-archimedean: Lipschitz constant 1 and Dirichlet
    energy -log(tau), exact when tau is rational."""
    tau_f = Fraction(tau) if isinstance(tau, (int, Fraction, str)) else None
    tau_value = float(tau_f) if tau_f is not None else float(tau)
    if not 0 < tau_value <= 1:
        raise InputError(f"truncation scale must lie in (0, 1], got {tau}")
    if v.is_finite:
        if tau_f is not None:
            exact = log_rational(1 / tau_f)
            return TruncationConstants(
                place=v, lipschitz=1, dirichlet=float(exact.numeric()), dirichlet_exact=exact
            )
        return TruncationConstants(place=v, lipschitz=1, dirichlet=-log(tau_value))
    lip = 1 + 1 / tau_f if tau_f is not None else 1.0 + 1.0 / tau_value
    return TruncationConstants(place=v, lipschitz=lip, dirichlet=-4.0 * float(mp.pi) * log(tau_value))


def _annulus_energy(center: complex, tau: float, resolution: int) -> float:
    # Midpoint tensor grid on the square of side 2 around the pole; the
    # integrand is the squared weak gradient of -log max(tau, r), i.e.
    # 1/r**2 on the annulus tau < r <= 1 and zero elsewhere.
    h = 2.0 / resolution
    offsets = -1.0 + h * (np.arange(resolution) + 0.5)
    r2 = offsets[:, None] ** 2 + offsets[None, :] ** 2
    mask = (r2 > tau * tau) & (r2 <= 1.0)
    return float(np.sum(1.0 / r2[mask]) * h * h)


def dirichlet_quadrature(alpha, tau: float, grid_resolution: int) -> float:
    """Two-chart tensor-grid quadrature of the Dirichlet energy of the
    truncated local height.

    Each chart sees the pole of the truncated potential at the chart image
    of alpha; after the substitution centering that image, the chart's
    contribution is the radial integral of 1/r**2 over tau < r <= 1, so the
    grid sum converges to -2*pi*log(tau) per chart and -4*pi*log(tau) in
    total, matching the closed form.  alpha must sit farther than tau/2
    from the chart boundary (the unit circle) so the pole annulus lives in
    a single chart.
    """
    tau = float(tau)
    if not 0 < tau <= 1:
        raise InputError(f"truncation scale must lie in (0, 1], got {tau}")
    if grid_resolution < 256:
        raise InputError(f"grid resolution must be >= 256, got {grid_resolution}")
    if isinstance(alpha, GaussianRational):
        a = complex(alpha.to_mpc(64))
    elif isinstance(alpha, (int, Fraction)):
        a = complex(float(Fraction(alpha)), 0.0)
    else:
        a = complex(alpha)
    if tau < 1 and abs(abs(a) - 1.0) <= tau / 2:
        raise InputError("alpha must be farther than tau/2 from the chart boundary")
    centers = [a, (1 / a if a != 0 else 0j)]
    return sum(_annulus_energy(c, tau, grid_resolution) for c in centers)


def equidistribution_bound(
    orbit_size: int,
    canonical_height: float,
    tau: float,
    c2: float,
    v: Place,
    kappa: float = 1.0,
) -> float:
    """Right-hand side of the quantitative equidistribution inequality for
    the truncated local height: Lipschitz term plus the height-energy term.
    """
    if orbit_size < 2:
        raise InputError(f"orbit size must be >= 2, got {orbit_size}")
    constants = truncation_constants(tau, v)
    n = float(orbit_size)
    lip_term = float(constants.lipschitz) / n ** (1.0 / kappa)
    energy = 2.0 * canonical_height + c2 * log(n) / sqrt(n)
    return lip_term + sqrt(max(0.0, energy)) * sqrt(max(0.0, constants.dirichlet))


def decay_envelope(orbit_size: int, canonical_height: float, c3: float) -> float:
    """Aggregate decay envelope C3 * (1/sqrt(N) + sqrt(h + log N / N))."""
    if orbit_size < 2:
        raise InputError(f"orbit size must be >= 2, got {orbit_size}")
    n = float(orbit_size)
    return c3 * (1.0 / sqrt(n) + sqrt(max(0.0, canonical_height + log(n) / n)))
