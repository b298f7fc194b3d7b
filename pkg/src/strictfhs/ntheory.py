"""Small integer helpers (thin wrappers over sympy's factorization)."""

from __future__ import annotations

from functools import lru_cache
from math import gcd

from sympy import factorint, isprime

__all__ = [
    "is_prime",
    "factorize",
    "prime_power",
    "is_prime_power",
    "least_prime_factor",
    "prime_divisors",
    "ceil_div",
    "gcd",
]


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(factorint(n).items()))


def factorize(n: int) -> dict[int, int]:
    """Prime factorization as an ordered ``{prime: exponent}`` dict."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    return dict(_factor(n))


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in _factor(n)] if n > 1 else []


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` or None if q is not a prime power."""
    if q < 2:
        return None
    f = _factor(q)
    if len(f) != 1:
        return None
    return f[0]


def is_prime_power(q: int) -> bool:
    return prime_power(q) is not None


def least_prime_factor(n: int) -> int | None:
    """Smallest prime dividing n; None for n == 1."""
    if n < 1:
        raise ValueError(f"least prime factor undefined for {n}")
    if n == 1:
        return None
    return _factor(n)[0][0]


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)
