"""Independent n = 2 oracle: valuations of -alpha +/- sqrt(beta).

Uses the valuation of the norm when beta is a p-adic non-square and an
explicit Tonelli-Shanks / Hensel-lifted square root when it is one; no
Newton polygon is consulted anywhere.
"""

from fractions import Fraction

from orbitintegra.arith import padic_valuation


def _tonelli(a: int, p: int) -> int:
    """Square root of a mod odd prime p (a assumed to be a residue)."""
    a %= p
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def hensel_sqrt(c: Fraction, p: int, digits: int) -> Fraction | None:
    """A rational s with v_p(s**2 - c) >= digits, or None when c is not a
    square in Q_p."""
    v = padic_valuation(c, p)
    if v % 2:
        return None
    unit = c / Fraction(p) ** v
    modulus = p ** (digits + 8)
    u = unit.numerator * pow(unit.denominator, -1, modulus) % modulus
    if p == 2:
        if u % 8 != 1:
            return None
        x, k = 1, 3
        while (1 << k) < modulus:
            if (x * x - u) % (1 << (k + 1)):
                x += 1 << (k - 1)
            k += 1
    else:
        if pow(u, (p - 1) // 2, p) != 1:
            return None
        x = _tonelli(u, p)
        pk = p
        while pk < modulus:
            pk = min(pk * pk, modulus)
            x = (x + u * pow(x, -1, pk)) % pk
            x = x * pow(2, -1, pk) % pk
    return Fraction(x) * Fraction(p) ** (v // 2)


def oracle_quadratic_profile(alpha: Fraction, beta: Fraction, p: int):
    """Multiset of v_p(root - alpha) for the two square roots of beta."""
    v_beta = padic_valuation(beta, p)
    norm_val = padic_valuation(alpha * alpha - beta, p) if alpha * alpha != beta else None
    assert norm_val is not None
    if alpha == 0:
        return sorted([Fraction(v_beta, 2)] * 2, reverse=True)
    v_alpha = padic_valuation(alpha, p)
    if v_beta % 2:
        shared = min(Fraction(v_alpha), Fraction(v_beta, 2))
        return sorted([shared, shared], reverse=True)
    digits = abs(norm_val) + 2 * abs(v_alpha) + abs(v_beta) + 16
    s = hensel_sqrt(beta, p, digits)
    if s is None:
        half = Fraction(norm_val, 2)
        return sorted([half, half], reverse=True)
    v_plus = padic_valuation(s - alpha, p)
    v_minus = padic_valuation(-s - alpha, p)
    assert v_plus + v_minus == norm_val, "oracle precision too small"
    return sorted([Fraction(v_plus), Fraction(v_minus)], reverse=True)


