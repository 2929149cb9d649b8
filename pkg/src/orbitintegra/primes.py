"""Deterministic primality testing and integer factorization.

Everything here is reproducible: trial division uses a fixed sieve, and the
Pollard-Brent stage walks a fixed, deterministic sequence of polynomial
offsets, so equal inputs always factor along the same path.  The intended
envelope is desk scale (inputs staying below roughly 2**128); larger inputs
are attempted but may raise :class:`ResourceError` when the bounded search
is exhausted.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt

from .errors import InputError, ResourceError

try:  # optional C-speed big integers, used transparently when present
    from gmpy2 import gcd as _gcd
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _gcd = gcd
    _mpz = int

__all__ = [
    "is_prime",
    "factorize",
    "euler_totient",
    "integer_nth_root",
    "primes_below",
    "smallest_prime_factor",
]


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * limit
    flags[0:2] = b"\x00\x00"
    for i in range(2, isqrt(limit - 1) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return [i for i in range(limit) if flags[i]]


_SMALL_PRIMES = _sieve(10_000)
_SMALL_PRIME_SET = frozenset(_SMALL_PRIMES)

# Deterministic Miller-Rabin witness set, valid for all n < 3.317e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981


def primes_below(limit: int) -> list[int]:
    """All primes p < limit, ascending."""
    if limit <= 10_000:
        from bisect import bisect_left

        return _SMALL_PRIMES[: bisect_left(_SMALL_PRIMES, limit)]
    return _sieve(limit)


def _miller_rabin(n: int, bases) -> bool:
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _strong_lucas_prp(n: int) -> bool:
    # Selfridge parameter search: first D in 5, -7, 9, ... with (D|n) = -1.
    def jacobi(a: int, m: int) -> int:
        a %= m
        result = 1
        while a:
            while a % 2 == 0:
                a //= 2
                if m % 8 in (3, 5):
                    result = -result
            a, m = m, a
            if a % 4 == 3 and m % 4 == 3:
                result = -result
            a %= m
        return result if m == 1 else 0

    D = 5
    while True:
        j = jacobi(D % n, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -(D + 2) if D > 0 else -(D - 2)
    P, Q = 1, (1 - D) // 4

    d = n + 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    U, V, Qk = 0, 2, 1
    for bit in bin(d)[2:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) % n, (D * U + P * V) % n
            if U % 2:
                U += n
            if V % 2:
                V += n
            U, V = U // 2 % n, V // 2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        if V == 0:
            return True
        Qk = Qk * Qk % n
    return False


@lru_cache(maxsize=1 << 16)
def is_prime(n: int) -> bool:
    """Deterministic for n < 3.317e24 (fixed Miller-Rabin witnesses);
    Baillie-PSW above that, which has no known counterexample."""
    if n < 2:
        return False
    if n < 10_000:
        return n in _SMALL_PRIME_SET
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n < _MR_DETERMINISTIC_LIMIT:
        return _miller_rabin(n, _MR_BASES)
    return _miller_rabin(n, (2,)) and _strong_lucas_prp(n)


def _pollard_brent(n: int, max_iterations: int = 1 << 24) -> int | None:
    """Brent cycle variant of Pollard rho with deterministic offsets.

    Returns a nontrivial factor of composite odd n, or None if the
    iteration budget runs out for every offset.
    """
    if n % 2 == 0:
        return 2
    n = _mpz(n)
    for c in range(1, 64):
        y, m = _mpz(2), 128
        g, r, q = _mpz(1), 1, _mpz(1)
        iterations = 0
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * (x - y) % n
                g = _gcd(q, n)
                k += m
            r *= 2
            iterations += r
            if iterations > max_iterations:
                g = 0
                break
        if g == 0:
            continue
        if g == n:
            # Backtrack one step at a time.
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = _gcd(x - ys, n)
        if 1 < g < n:
            return int(g)
    return None


def _perfect_power(n: int) -> tuple[int, int] | None:
    """(base, k) with base**k == n and k >= 2, or None."""
    for k in range(2, n.bit_length() + 1):
        root, exact = integer_nth_root(n, k)
        if exact:
            return root, k
        if root < 2:
            break
    return None


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}.

    Trial division by the fixed small-prime sieve strips everything below
    10**4; surviving cofactors are split by deterministic Pollard-Brent
    (which also recovers any factor below 10**6 faster than finishing
    trial division would).
    """
    if n < 1:
        raise InputError(f"factorize requires a positive integer, got {n}")
    result: dict[int, int] = {}
    survived_to_sqrt = False
    for p in _SMALL_PRIMES:
        if p * p > n:
            survived_to_sqrt = True
            break
        while n % p == 0:
            result[p] = result.get(p, 0) + 1
            n //= p
    if n == 1:
        return result
    # Trial division reached sqrt(n), so the survivor is prime outright.
    if survived_to_sqrt or is_prime(n):
        result[n] = result.get(n, 0) + 1
        return result

    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            result[m] = result.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        if d is None:
            # Rho stalls are essentially only possible on perfect powers.
            power = _perfect_power(m)
            if power is None:
                raise ResourceError(
                    f"could not factor {m} within the deterministic search budget"
                )
            base, k = power
            stack.extend([base] * k)
            continue
        stack.append(d)
        stack.append(m // d)
    return result


def euler_totient(n: int) -> int:
    """Euler's totient, multiplicative over the factorization of n."""
    if n < 1:
        raise InputError(f"totient requires a positive integer, got {n}")
    phi = 1
    for p, e in factorize(n).items():
        phi *= (p - 1) * p ** (e - 1)
    return phi


def integer_nth_root(n: int, k: int) -> tuple[int, bool]:
    """Floor of the k-th root of n >= 0, and whether it is exact."""
    if n < 0 or k < 1:
        raise InputError("integer_nth_root requires n >= 0 and k >= 1")
    if k == 1 or n in (0, 1):
        return n, True
    if k == 2:
        r = isqrt(n)
        return r, r * r == n
    # Newton iteration from a float seed, then correct.
    r = int(round(n ** (1.0 / k))) if n.bit_length() < 900 else 1 << (n.bit_length() // k + 1)
    if r < 1:
        r = 1
    while True:
        better = ((k - 1) * r + n // r ** (k - 1)) // k
        if better >= r:
            break
        r = better
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r, r ** k == n


def smallest_prime_factor(n: int, bound: int) -> int | None:
    """Smallest prime factor of n that is < bound, by trial division only."""
    if n < 2:
        return None
    for p in primes_below(bound):
        if p * p > n:
            return n if n < bound else None
        if n % p == 0:
            return p
    return None
