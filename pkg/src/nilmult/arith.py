"""Exact integer helpers: Moebius function, binomials, small primes.

All values are Python ints, so nothing overflows.
"""

from __future__ import annotations

import math
from functools import lru_cache


@lru_cache(maxsize=None)
def mobius(m: int) -> int:
    """Moebius function by trial division.

    >>> [mobius(k) for k in (1, 2, 6, 12, 30)]
    [1, -1, 1, 0, -1]
    """
    if m < 1:
        raise ValueError(f"mobius is defined for m >= 1, got {m}")
    sign = 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            sign = -sign
        p += 1
    if m > 1:
        sign = -sign
    return sign


def divisors(n: int) -> list[int]:
    """Positive divisors of n in ascending order."""
    if n < 1:
        raise ValueError(f"divisors needs n >= 1, got {n}")
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def binomial(n: int, k: int) -> int:
    """C(n, k) for non-negative arguments; zero when k > n."""
    if n < 0 or k < 0:
        raise ValueError(f"binomial needs n, k >= 0, got ({n}, {k})")
    return math.comb(n, k)


def gen_binomial(a: int, k: int) -> int:
    """Generalized binomial a(a-1)...(a-k+1)/k! for any integer a."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    num = 1
    for i in range(k):
        num *= a - i
    return num // math.factorial(k)


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [p for p, flag in enumerate(sieve) if flag]


def lemma24_check(w: int, r: int) -> bool:
    """Divisibility certificate for ``r | C(r, w)``.

    Returns whether every prime ``p <= w`` is coprime to ``r``. When that
    holds, ``r | C(r, w)`` is checked and an ``ArithmeticError`` is raised if
    it fails.
    """
    if not 1 <= w < r:
        raise ValueError(f"need 1 <= w < r, got w={w}, r={r}")
    if any(r % p == 0 for p in primes_up_to(w)):
        return False
    if binomial(r, w) % r != 0:
        raise ArithmeticError(f"{r} does not divide C({r}, {w})")
    return True
