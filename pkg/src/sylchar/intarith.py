"""Small integer arithmetic helpers shared across the package.

Everything here is exact integer arithmetic: 2-adic parts, 2-adic
expansions, multiplicative orders and CRT solves.  The odd-part/2-part
helpers are centralised here because half the checks in the package are
parity statements about group orders and indices.
"""

from __future__ import annotations

import math
from functools import lru_cache

from sympy import isprime


def two_part(n: int) -> int:
    """Largest power of 2 dividing n (n > 0)."""
    if n <= 0:
        raise ValueError(f"two_part needs a positive integer, got {n}")
    return n & -n


def odd_part(n: int) -> int:
    """n with every factor of 2 removed."""
    return n // two_part(n)


def p_part(n: int, p: int) -> int:
    """Largest power of the prime p dividing n."""
    if n <= 0:
        raise ValueError(f"p_part needs a positive integer, got {n}")
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def two_adic(n: int) -> tuple[int, ...]:
    """Strictly decreasing exponents r_1 > ... > r_t with n = sum 2^r_i."""
    if n <= 0:
        raise ValueError(f"two_adic needs a positive integer, got {n}")
    return tuple(i for i in range(n.bit_length() - 1, -1, -1) if n >> i & 1)


def is_two_power(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def prime_power(q: int) -> tuple[int, int]:
    """Decompose q = p^a (p prime, a >= 1); raises if q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, math.isqrt(q) + 1):
        if q % p == 0:
            a = 0
            m = q
            while m % p == 0:
                m //= p
                a += 1
            if m != 1 or not isprime(p):
                raise ValueError(f"{q} is not a prime power")
            return p, a
    return q, 1  # q itself prime


def multiplicative_order(a: int, n: int) -> int:
    """Order of a modulo n; requires gcd(a, n) = 1."""
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not invertible mod {n}")
    if n == 1:
        return 1
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def crt(r1: int, m1: int, r2: int, m2: int) -> int:
    """Solve x = r1 (mod m1), x = r2 (mod m2) for coprime moduli."""
    g = math.gcd(m1, m2)
    if g != 1:
        raise ValueError("crt needs coprime moduli")
    return (r1 + m1 * ((r2 - r1) * pow(m1, -1, m2) % m2)) % (m1 * m2)


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return tuple(small + large[::-1])


def prime_factors(n: int) -> tuple[int, ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)
