"""Factorization of primitive integer binomials b*x**n - a over the
integers: modular factorization at a well-chosen odd prime, quadratic
Hensel lifting past the Landau-Mignotte bound, and subset recombination.

Binomials make the prime-selection stage essentially free.  Modulo a prime
p coprime to n*a*b the polynomial is automatically square-free, monomials
reduce to monomials modulo x**n - c, so the Frobenius powers x**(p**k)
stay monomials, and greatest common divisors of binomials remain binomials
while their exponents follow the Euclidean algorithm.  The number of
irreducible factors modulo p and their degree multiset therefore cost a
handful of scalar operations per probed prime, which buys three cheap
irreducibility certificates before any lifting is attempted:

  * a Newton-polygon slope certificate at a prime dividing a or b;
  * an irreducible-modulo-p witness;
  * an intersection of achievable proper factor-degree sums, over many
    primes, that leaves nothing between 0 and n.

Only genuinely reducible inputs, and the rare undecided irreducible ones,
reach the lifting and recombination stage.
"""

from __future__ import annotations

from itertools import combinations
from math import gcd, isqrt

from .errors import CertificationError, InputError
from .primes import primes_below

__all__ = ["factor_primitive_binomial"]

_PROBE_COUNT = 18
_PROBE_POOL = [p for p in primes_below(20_000) if p % 2 == 1]


# ---------------------------------------------------------------------------
# Dense polynomials modulo an integer, constant term first.


def _trim(poly: list[int]) -> list[int]:
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_mul(f: list[int], g: list[int], m: int) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] += a * b
    return _trim([c % m for c in out])


def _poly_add(f: list[int], g: list[int], m: int) -> list[int]:
    out = [0] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] = a % m
    for i, b in enumerate(g):
        out[i] = (out[i] + b) % m
    return _trim(out)


def _poly_sub(f: list[int], g: list[int], m: int) -> list[int]:
    out = [0] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] = a % m
    for i, b in enumerate(g):
        out[i] = (out[i] - b) % m
    return _trim(out)


def _poly_divmod(f: list[int], g: list[int], m: int) -> tuple[list[int], list[int]]:
    """Division with remainder modulo m; lc(g) must be invertible mod m."""
    inv = pow(g[-1], -1, m)
    rem = [c % m for c in f]
    dg = len(g) - 1
    if len(rem) - 1 < dg or rem == [0]:
        return [0], _trim(rem)
    quot = [0] * (len(rem) - dg)
    for k in range(len(quot) - 1, -1, -1):
        coeff = rem[dg + k] * inv % m
        if coeff:
            quot[k] = coeff
            for i, c in enumerate(g):
                if c:
                    rem[i + k] = (rem[i + k] - coeff * c) % m
    return _trim(quot), _trim(rem)


def _poly_gcd(f: list[int], g: list[int], p: int) -> list[int]:
    a, b = _trim([c % p for c in f]), _trim([c % p for c in g])
    while b != [0]:
        _, r = _poly_divmod(a, b, p)
        a, b = b, r
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _poly_ext_gcd(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    """(s, t) with s*f + t*g = 1 mod p, for coprime f, g."""
    r0, r1 = _trim([c % p for c in f]), _trim([c % p for c in g])
    s0, s1 = [1], [0]
    t0, t1 = [0], [1]
    while r1 != [0]:
        q, r = _poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, p), p)
        t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1, p), p)
    if len(r0) != 1:
        raise CertificationError("modular factors were not coprime")
    inv = pow(r0[0], -1, p)
    return [c * inv % p for c in s0], [c * inv % p for c in t0]


def _powmod(base: list[int], exponent: int, modulus: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_divmod(base, modulus, p)[1]
    while exponent:
        if exponent & 1:
            result = _poly_divmod(_poly_mul(result, base, p), modulus, p)[1]
        base = _poly_divmod(_poly_mul(base, base, p), modulus, p)[1]
        exponent >>= 1
    return result


# ---------------------------------------------------------------------------
# Scalar-only factor profile of x**n - c modulo p.


def _binomial_gcd(a: int, u: int, b: int, v: int, p: int) -> tuple[int, int] | None:
    """gcd(x**a - u, x**b - v) mod p as (exponent, constant); None for 1.

    One remainder step sends x**a - u modulo x**b - v to
    v**(a//b) * x**(a % b) - u, another binomial, so the exponents follow
    the Euclidean algorithm and every step costs one scalar power.
    """
    while True:
        if a < b:
            a, u, b, v = b, v, a, u
        q, r = divmod(a, b)
        w = u * pow(v, -q, p) % p  # x**a - u  ->  x**r - w  (mod x**b - v)
        if r == 0:
            return (b, v) if w == 1 else None
        a, u = b, v
        b, v = r, w


def _modular_factor_profile(n: int, c: int, p: int) -> dict[int, int]:
    """Degree -> multiplicity of the irreducible factors of x**n - c
    modulo p, for p coprime to n*c, via scalar arithmetic only."""
    exact: dict[int, int] = {}
    accounted = 0
    gamma, r = 1, 1
    k = 0
    while accounted < n and k < n // 2:
        k += 1
        gamma = pow(gamma, p, p) * pow(c, (r * p) // n, p) % p
        r = r * p % n
        # deg gcd(x**n - c, x**(p**k) - x): factors of degree dividing k.
        if r == 1:
            dividing = n if gamma == 1 else 0
        else:
            g = _binomial_gcd(n, c, r - 1, pow(gamma, -1, p), p)
            dividing = g[0] if g else 0
        in_lower = sum(j * exact[j] for j in exact if k % j == 0)
        fresh = dividing - in_lower
        if fresh:
            exact[k] = fresh // k
            accounted += fresh
    if accounted < n:
        remainder = n - accounted
        exact[remainder] = exact.get(remainder, 0) + 1
    return exact


# ---------------------------------------------------------------------------
# Full modular factorization at the chosen prime.


def _lcg_poly(seed: int, degree: int, p: int) -> list[int]:
    mask = (1 << 64) - 1
    state = (seed * 6364136223846793005 + 1442695040888963407) & mask
    coeffs = []
    for _ in range(degree):
        state = (state * 6364136223846793005 + 1442695040888963407) & mask
        coeffs.append(state % p)
    coeffs.append(1)
    return _trim(coeffs)


def _equal_degree_split(part: list[int], k: int, p: int, seed: int) -> list[list[int]]:
    """Split a product of distinct irreducible degree-k factors mod odd p."""
    degree = len(part) - 1
    if degree == k:
        return [part]
    exponent = (p ** k - 1) // 2
    for attempt in range(1, 65):
        h = _lcg_poly(seed + attempt, min(degree - 1, 2 * k), p)
        u = _poly_sub(_powmod(h, exponent, part, p), [1], p)
        if u == [0]:
            continue
        d = _poly_gcd(u, part, p)
        if 0 < len(d) - 1 < degree:
            quotient, rem = _poly_divmod(part, d, p)
            if rem != [0]:
                raise CertificationError("splitting produced a non-divisor")
            return _equal_degree_split(d, k, p, seed + 97 * attempt) + _equal_degree_split(
                quotient, k, p, seed + 193 * attempt
            )
    raise CertificationError("equal-degree splitting stalled")


def _factor_mod_p(n: int, c: int, p: int) -> list[list[int]]:
    """Monic irreducible factors of x**n - c modulo odd p, p coprime to
    n*c: distinct-degree peeling then equal-degree splitting."""
    remaining = _trim([(-c) % p] + [0] * (n - 1) + [1])
    factors: list[list[int]] = []
    frob = [0, 1]  # x**(p**k) mod remaining, updated in place
    k = 0
    while len(remaining) - 1 > 0:
        k += 1
        if 2 * k > len(remaining) - 1:
            factors.append(remaining)
            break
        frob = _powmod(frob, p, remaining, p)
        part = _poly_gcd(_poly_sub(frob, [0, 1], p), remaining, p)
        if len(part) - 1 > 0:
            factors.extend(_equal_degree_split(part, k, p, seed=(n * 1009 + c) * 31 + k))
            remaining, rem = _poly_divmod(remaining, part, p)
            if rem != [0]:
                raise CertificationError("distinct-degree part does not divide")
            frob = _poly_divmod(frob, remaining, p)[1]
    return factors


# ---------------------------------------------------------------------------
# Quadratic Hensel lifting with a factor tree.


def _hensel_step(m, f, g, h, s, t):
    """Lift f = g*h (lc carried by g, h monic, s*g + t*h = 1) from mod m
    to mod m**2, returning the refreshed (g, h, s, t)."""
    m2 = m * m
    e = _poly_sub(f, _poly_mul(g, h, m2), m2)
    q, r = _poly_divmod(_poly_mul(s, e, m2), h, m2)
    g1 = _poly_add(g, _poly_add(_poly_mul(t, e, m2), _poly_mul(q, g, m2), m2), m2)
    h1 = _poly_add(h, r, m2)
    b = _poly_sub(_poly_add(_poly_mul(s, g1, m2), _poly_mul(t, h1, m2), m2), [1], m2)
    cq, cr = _poly_divmod(_poly_mul(s, b, m2), h1, m2)
    s1 = _poly_sub(s, cr, m2)
    t1 = _poly_sub(_poly_sub(t, _poly_mul(t, b, m2), m2), _poly_mul(cq, g1, m2), m2)
    return g1, h1, s1, t1


def _hensel_lift(p: int, f: list[int], factors: list[list[int]], target: int) -> list[list[int]]:
    """Monic factors mod p**target of f, given its monic factors mod p
    (f = lc * prod factors mod p).  Pairs halves recursively."""
    modulus = p ** target
    if len(factors) == 1:
        inv = pow(f[-1] % modulus, -1, modulus)
        return [_trim([c * inv % modulus for c in f])]
    half = (len(factors) + 1) // 2
    left, right = factors[:half], factors[half:]
    g = [f[-1] % p]
    for poly in left:
        g = _poly_mul(g, poly, p)
    h = [1]
    for poly in right:
        h = _poly_mul(h, poly, p)
    s, t = _poly_ext_gcd(g, h, p)
    m = p
    while m < modulus:
        g, h, s, t = _hensel_step(m, f, g, h, s, t)
        m = m * m
    g = _trim([c % modulus for c in g])
    h = _trim([c % modulus for c in h])
    return _hensel_lift(p, g, left, target) + _hensel_lift(p, h, right, target)


# ---------------------------------------------------------------------------
# Certificates.


def _newton_slope_certificate(n: int, a: int, b: int) -> bool:
    """Irreducibility from a single Newton segment: a prime dividing a or
    b to a multiplicity coprime to n forces one Galois orbit of size n."""
    from .primes import factorize

    for value in (abs(a), b):
        if value == 1:
            continue
        for exponent in factorize(value).values():
            if gcd(exponent, n) == 1:
                return True
    return False


def _degree_mask(profile: dict[int, int], n: int) -> int:
    mask = 1
    for degree, multiplicity in profile.items():
        for _ in range(multiplicity):
            mask |= mask << degree
    return mask & ((1 << (n + 1)) - 1)


# ---------------------------------------------------------------------------
# Recombination over the integers.


def _symmetric(value: int, modulus: int) -> int:
    value %= modulus
    if value > modulus // 2:
        value -= modulus
    return value


def _primitive(poly: list[int]) -> list[int]:
    content = 0
    for c in poly:
        content = gcd(content, abs(c))
    if poly[-1] < 0:
        content = -content
    return [c // content for c in poly]


def _exact_divide_int(f: list[int], g: list[int]) -> list[int] | None:
    """Quotient f / g over the integers when the division is exact, else
    None.  Integer synthetic division: every quotient step of an exact
    division divides evenly, so a failing remainder bails out early."""
    if len(g) > len(f):
        return None
    rem = list(f)
    lead = g[-1]
    quot = [0] * (len(f) - len(g) + 1)
    for k in range(len(quot) - 1, -1, -1):
        head = rem[len(g) - 1 + k]
        if head % lead:
            return None
        q = head // lead
        quot[k] = q
        if q:
            for i, c in enumerate(g):
                if c:
                    rem[i + k] -= q * c
    if any(rem):
        return None
    return quot


def _recombine(model: list[int], p: int, target: int, lifted: list[list[int]]) -> list[list[int]]:
    """Zassenhaus subset search: ascending subset size, lexicographic
    order, trailing-coefficient divisibility as the cheap pre-test."""
    modulus = p ** target
    f = list(model)
    available = list(range(len(lifted)))
    factors: list[list[int]] = []
    size = 1
    while 2 * size <= len(available):
        found = False
        for subset in combinations(available, size):
            lc = f[-1]
            tc = lc
            for i in subset:
                tc = tc * lifted[i][0] % modulus
            tc = _symmetric(tc, modulus)
            if tc == 0 or (lc * f[0]) % tc != 0:
                continue
            candidate = [lc % modulus]
            for i in subset:
                candidate = _poly_mul(candidate, lifted[i], modulus)
            candidate = _primitive([_symmetric(coeff, modulus) for coeff in candidate])
            if len(candidate) - 1 != sum(len(lifted[i]) - 1 for i in subset):
                continue
            quotient = _exact_divide_int(f, candidate)
            if quotient is None:
                continue
            factors.append(candidate)
            f = quotient
            available = [i for i in available if i not in subset]
            found = True
            break
        if not found:
            size += 1
    if len(f) > 1:
        factors.append(_primitive(f))
    return factors


# ---------------------------------------------------------------------------
# Entry point.


def factor_primitive_binomial(n: int, a: int, b: int) -> list[tuple[int, ...]]:
    """Irreducible factors over the integers of the primitive binomial
    b*x**n - a (gcd(a, b) = 1, b >= 1, a != 0), as constant-first
    coefficient tuples with positive leading coefficients, sorted by
    (degree, coefficients)."""
    if n < 1 or a == 0 or b < 1 or gcd(abs(a), b) != 1:
        raise InputError("need a primitive binomial b*x**n - a")
    model = [-a] + [0] * (n - 1) + [b]
    if n == 1:
        return [tuple(model)]

    if _newton_slope_certificate(n, a, b):
        return [tuple(model)]

    trivial_mask = 1 | (1 << n)
    intersection = (1 << (n + 1)) - 1
    profiles: list[tuple[int, int]] = []
    for p in _PROBE_POOL:
        if len(profiles) >= _PROBE_COUNT:
            break
        if n % p == 0 or a % p == 0 or b % p == 0:
            continue
        c = a * pow(b, -1, p) % p
        profile = _modular_factor_profile(n, c, p)
        count = sum(profile.values())
        if count == 1:
            return [tuple(model)]
        profiles.append((count, p))
        intersection &= _degree_mask(profile, n)
        if intersection == trivial_mask:
            return [tuple(model)]

    _, p = min(profiles)

    # Landau-Mignotte style coefficient bound, doubled for the symmetric
    # representation, fixes the lifting precision.
    height = max(abs(a), b)
    bound = 2 * (isqrt(n + 1) + 1) * (1 << n) * height * b
    target = 1
    while p ** target <= 2 * bound:
        target += 1

    c = a * pow(b, -1, p) % p
    modular = _factor_mod_p(n, c, p)
    check = [b % p]
    for poly in modular:
        check = _poly_mul(check, poly, p)
    if check != _trim([coeff % p for coeff in model]):
        raise CertificationError("modular factorization failed verification")

    lifted = sorted(_hensel_lift(p, model, sorted(modular), target))
    product = [b % p ** target]
    for poly in lifted:
        product = _poly_mul(product, poly, p ** target)
    if product != _trim([coeff % p ** target for coeff in model]):
        raise CertificationError("hensel lifting failed verification")

    factors = _recombine(model, p, target, lifted)

    out = []
    for poly in factors:
        if poly[-1] < 0:
            poly = [-coeff for coeff in poly]
        out.append(tuple(poly))
    out.sort(key=lambda coeffs: (len(coeffs), coeffs))
    if sum(len(f) - 1 for f in out) != n:
        raise CertificationError("factor degrees do not sum to the input degree")
    return out
