"""Primality testing, prime sieves and the Moebius function."""

from __future__ import annotations

import random
from functools import lru_cache

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

# Miller-Rabin with the first 13 prime bases is deterministic below this bound.
_DETERMINISTIC_BOUND = 3317044064679887385961981


def is_prime(n: int, rounds: int = 20) -> bool:
    """Miller-Rabin test; deterministic below ~3.3e24, probabilistic above."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    if n < _DETERMINISTIC_BOUND:
        bases = _SMALL_PRIMES
    else:
        rng = random.Random(n)
        bases = tuple(rng.randrange(2, n - 1) for _ in range(rounds))

    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


@lru_cache(maxsize=8)
def _sieve(limit: int) -> tuple[int, ...]:
    if limit < 2:
        return ()
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return tuple(i for i, f in enumerate(flags) if f)


def primes_up_to(limit: int) -> list[int]:
    """All primes ``p <= limit`` in increasing order."""
    return list(_sieve(int(limit)))


def mobius_table(limit: int) -> list[int]:
    """``mu[n]`` for ``0 <= n <= limit`` (``mu[0]`` is set to 0)."""
    mu = [1] * (limit + 1)
    if limit >= 0:
        mu[0] = 0
    for p in _sieve(limit):
        for k in range(p, limit + 1, p):
            mu[k] = -mu[k]
        sq = p * p
        for k in range(sq, limit + 1, sq):
            mu[k] = 0
    return mu


def smallest_prime_factors(limit: int) -> list[int]:
    """``spf[n]`` = least prime dividing ``n`` (``spf[0] = spf[1] = 0``)."""
    spf = [0] * (limit + 1)
    for p in _sieve(limit):
        for k in range(p, limit + 1, p):
            if spf[k] == 0:
                spf[k] = p
    return spf
