"""Residue-ring helpers over Z_n: blocks, difference multisets, CRT."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import gcd
from typing import Iterable

from .errors import BadDivisor, ModulusMismatch, NotCoprime

__all__ = [
    "Block",
    "internal_differences",
    "external_differences",
    "CRT",
    "crt_split",
    "is_complete_coset_representatives",
]


@dataclass(frozen=True)
class Block:
    elements: tuple[int, ...]
    n: int

    def __post_init__(self):
        els = self.elements
        if any(not 0 <= e < self.n for e in els):
            raise ValueError(f"block element out of range for Z_{self.n}: {els}")
        if any(a >= b for a, b in zip(els, els[1:])):
            raise ValueError(f"block elements must be strictly increasing: {els}")

    @classmethod
    def of(cls, elements: Iterable[int], n: int) -> "Block":
        return cls(tuple(sorted({e % n for e in elements})), n)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def shift(self, t: int) -> "Block":
        return Block.of((e + t for e in self.elements), self.n)


def _elems(b) -> tuple[tuple[int, ...], int | None]:
    if isinstance(b, Block):
        return b.elements, b.n
    return tuple(b), None


def internal_differences(block: Block, n: int | None = None) -> Counter:
    """Multiset {y - x : x != y in B} reduced mod n."""
    els, bn = _elems(block)
    n = bn if n is None else n
    return Counter((y - x) % n for x in els for y in els if x != y)


def external_differences(a: Block, b: Block, n: int | None = None) -> Counter:
    """Multiset {y - x : (x, y) in A x B}; may contain 0."""
    ea, na = _elems(a)
    eb, nb = _elems(b)
    if na is not None and nb is not None and na != nb:
        raise ModulusMismatch(f"blocks live in Z_{na} and Z_{nb}")
    n = n if n is not None else (na if na is not None else nb)
    if n is None:
        raise ModulusMismatch("modulus unknown for plain sequences")
    return Counter((y - x) % n for x in ea for y in eb)


@dataclass(frozen=True)
class CRT:
    """Ring isomorphism Z_{n1 n2} <-> Z_{n1} x Z_{n2}."""

    n1: int
    n2: int

    @property
    def n(self) -> int:
        return self.n1 * self.n2

    def split(self, x: int) -> tuple[int, int]:
        return x % self.n1, x % self.n2

    def join(self, a: int, b: int) -> int:
        # x = a + n1 * ((b - a) * n1^{-1} mod n2)
        inv = pow(self.n1, -1, self.n2) if self.n2 > 1 else 0
        return (a % self.n1 + self.n1 * (((b - a) * inv) % self.n2)) % self.n


def crt_split(n1: int, n2: int) -> CRT:
    if n1 < 1 or n2 < 1 or gcd(n1, n2) != 1:
        raise NotCoprime(f"gcd({n1}, {n2}) != 1")
    return CRT(n1, n2)


def is_complete_coset_representatives(elems: Iterable[int], c: int,
                                      exclude: Iterable[int] = (),
                                      n: int | None = None) -> bool:
    """True iff elems mod c hit every residue of Z_c outside `exclude` exactly once.

    The cosets are those of the subgroup cZ_n; `n`, when given, must be a
    multiple of c.
    """
    if c < 1 or (n is not None and n % c):
        raise BadDivisor(f"{c} does not divide {n}")
    target = set(range(c)) - {x % c for x in exclude}
    seen = Counter(x % c for x in elems)
    return set(seen) == target and all(v == 1 for v in seen.values())
