"""Arithmetic in GF(p^k) with a fixed primitive element.

Elements are plain ints: the polynomial c_0 + c_1 x + ... + c_{k-1} x^{k-1}
is encoded as sum(c_i * p**i). Multiplication goes through full exp/log
tables, which is fine for the small fields used here (q <= 2**20).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import LogOfZero, NonPrimeCharacteristic, NotASubfield, RangeExceeded
from .ntheory import is_prime, prime_divisors, prime_power

MAX_ORDER = 1 << 20

__all__ = ["FiniteField", "FieldSpec", "field_create", "field_of_order", "MAX_ORDER"]


# --- polynomials over GF(p), coefficient lists low -> high -----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _poly_mulmod(a, b, m, p) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_mod(out, m, p)


def _poly_powmod(a, e: int, m, p) -> list[int]:
    result = [1]
    base = _poly_mod(a, m, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, m, p)
        base = _poly_mulmod(base, base, m, p)
        e >>= 1
    return result


def _digits(e: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        e, r = divmod(e, p)
        out.append(r)
    return out


def _is_irreducible(m: list[int], p: int) -> bool:
    k = len(m) - 1
    if k == 1:
        return True
    if m[0] == 0:
        return False
    for deg in range(1, k // 2 + 1):
        for low in range(p ** deg):
            divisor = _digits(low, p, deg) + [1]
            if not _poly_mod(m, divisor, p):
                return False
    return True


def _find_modulus(p: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return (0, 1)
    for low in range(p ** k):
        cand = _digits(low, p, k) + [1]
        if _is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def _is_primitive(z: list[int], modulus, p: int, q: int) -> bool:
    if not _trim(list(z)):
        return False
    if q == 2:
        return True
    for r in prime_divisors(q - 1):
        if _poly_powmod(z, (q - 1) // r, modulus, p) == [1]:
            return False
    return True


# --- the field --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteField:
    """GF(p^k) with a deterministic modulus and primitive element."""

    p: int
    k: int
    modulus: tuple[int, ...]
    alpha_index: int
    q: int = field(init=False)
    _exp: np.ndarray = field(init=False, repr=False)
    _log: np.ndarray = field(init=False, repr=False)
    _digits: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        p, k = self.p, self.k
        q = p ** k
        object.__setattr__(self, "q", q)
        weights = p ** np.arange(k, dtype=np.int64)
        digits = (np.arange(q, dtype=np.int64)[:, None] // weights) % p

        # multiplication-by-alpha matrix acting on coefficient column vectors
        a_cols = np.empty((k, k), dtype=np.int64)
        for j in range(k):
            basis = [0] * k
            basis[j] = 1
            prod = _poly_mulmod(basis, _digits(self.alpha_index, p, k), list(self.modulus), p)
            a_cols[:, j] = prod + [0] * (k - len(prod))

        # powers of alpha by doubling: V[:, b:2b] = A^b V[:, :b]
        vecs = np.zeros((k, q - 1), dtype=np.int64)
        vecs[0, 0] = 1
        filled, step = 1, a_cols.copy()
        while filled < q - 1:
            take = min(filled, q - 1 - filled)
            vecs[:, filled:filled + take] = (step @ vecs[:, :take]) % p
            filled += take
            step = (step @ step) % p
        exp = weights @ vecs
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        if (log[1:] < 0).any():
            raise AssertionError("designated element is not primitive")

        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "_log", log)
        object.__setattr__(self, "_digits", digits)

    # basic arithmetic
    def add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        if self.k == 1:
            return (x + y) % self.p
        return int(((self._digits[x] + self._digits[y]) % self.p) @ self._weights)

    def sub(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        if self.k == 1:
            return (x - y) % self.p
        return int(((self._digits[x] - self._digits[y]) % self.p) @ self._weights)

    def neg(self, x: int) -> int:
        return self.sub(0, x)

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return int(self._exp[(self._log[x] + self._log[y]) % (self.q - 1)])

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self._exp[(-self._log[x]) % (self.q - 1)])

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 1 if e == 0 else 0
        return int(self._exp[(self._log[x] * e) % (self.q - 1)])

    def log(self, x: int) -> int:
        """Discrete logarithm to base alpha."""
        if x == 0:
            raise LogOfZero("discrete log of 0 is undefined")
        return int(self._log[x])

    discrete_log = log

    def alpha_pow(self, e: int) -> int:
        return int(self._exp[e % (self.q - 1)])

    @property
    def alpha(self) -> int:
        return self.alpha_index

    @property
    def _weights(self) -> np.ndarray:
        return self.p ** np.arange(self.k, dtype=np.int64)

    def coeffs(self, x: int) -> list[int]:
        return [int(c) for c in self._digits[x]]

    def element(self, coeffs: Iterable[int]) -> int:
        c = list(coeffs)
        if len(c) > self.k or any(not 0 <= v < self.p for v in c):
            raise ValueError(f"bad coordinates {c} for GF({self.q})")
        return sum(v * self.p ** i for i, v in enumerate(c))

    # vectorized helpers
    def add_arrays(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        if self.p == 2:
            return xs ^ ys
        return ((self._digits[xs] + self._digits[ys]) % self.p) @ self._weights

    @property
    def exp_table(self) -> np.ndarray:
        return self._exp

    @property
    def log_table(self) -> np.ndarray:
        return self._log

    # subfields
    def _subfield_degree(self, base_q: int) -> int:
        pk = prime_power(base_q)
        if pk is None or pk[0] != self.p or self.k % pk[1]:
            raise NotASubfield(f"GF({base_q}) is not a subfield of GF({self.q})")
        return self.k // pk[1]

    def trace(self, x: int, base_q: int) -> int:
        """Tr_{q^m/q}(x) = sum of x^(q^i), returned as an element of this field."""
        m = self._subfield_degree(base_q)
        acc = 0
        y = x
        for _ in range(m):
            acc = self.add(acc, y)
            y = self.pow(y, base_q)
        return acc

    def trace_of_powers(self, base_q: int) -> np.ndarray:
        """Array t with t[e] = Tr(alpha^e) for 0 <= e < q-1."""
        m = self._subfield_degree(base_q)
        e = np.arange(self.q - 1, dtype=np.int64)
        acc = np.zeros(self.q - 1, dtype=np.int64)
        mult = 1
        for _ in range(m):
            acc = self.add_arrays(acc, self._exp[(e * mult) % (self.q - 1)])
            mult = mult * base_q % (self.q - 1) if self.q > 2 else 1
        return acc

    def subfield(self, base_q: int) -> list[int]:
        """GF(base_q) inside this field: 0 followed by powers of beta."""
        self._subfield_degree(base_q)
        step = (self.q - 1) // (base_q - 1)
        return [0] + [self.alpha_pow(j * step) for j in range(base_q - 1)]

    def elements_power_order(self) -> list[int]:
        """0, 1, alpha, alpha^2, ... ; the canonical enumeration of the field."""
        return [0] + [int(v) for v in self._exp]

    def __repr__(self):
        return f"GF({self.p}^{self.k}, modulus={list(self.modulus)}, alpha={self.alpha_index})"


FieldSpec = FiniteField


@lru_cache(maxsize=None)
def field_create(p: int, k: int = 1) -> FiniteField:
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"{p} is not prime")
    if k < 1:
        raise RangeExceeded(f"extension degree must be positive, got {k}")
    if p ** k > MAX_ORDER:
        raise RangeExceeded(f"GF({p}^{k}) exceeds the table limit {MAX_ORDER}")
    q = p ** k
    modulus = _find_modulus(p, k)
    if k > 1 and _is_primitive([0, 1], modulus, p, q):
        alpha = p
    else:
        alpha = next(z for z in range(1, q)
                     if _is_primitive(_digits(z, p, k), modulus, p, q))
    return FiniteField(p, k, modulus, alpha)


def field_of_order(q: int) -> FiniteField:
    pk = prime_power(q)
    if pk is None:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    return field_create(*pk)
