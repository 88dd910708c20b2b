"""Small prime utilities: deterministic tests, sieves, prime-power factoring."""

from __future__ import annotations

from typing import Iterator, Optional

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_range(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi."""
    return [n for n in range(max(lo, 2), hi + 1) if is_prime(n)]


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    k = n + 1
    while not is_prime(k):
        k += 1
    return k


def iter_primes() -> Iterator[int]:
    p = 2
    while True:
        yield p
        p = next_prime(p)


def factor_prime_power(q: int) -> Optional[tuple[int, int]]:
    """Return (p, l) with q = p^l, or None if q is not a prime power >= 2."""
    if q < 2:
        return None
    p = q
    for d in range(2, q + 1):
        if d * d > q:
            break
        if q % d == 0:
            p = d
            break
    l = 0
    m = q
    while m % p == 0:
        m //= p
        l += 1
    if m != 1:
        return None
    return p, l


def smallest_prime_not_dividing(m: int) -> int:
    """Least prime q with q not dividing m (m >= 1)."""
    p = 2
    while m % p == 0:
        p = next_prime(p)
    return p
