"""Homogeneous cyclic difference matrices over Z_w."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionViolated
from .ntheory import least_prime_factor

__all__ = ["CDM", "build_homogeneous_cdm", "verify_cdm"]


@dataclass(frozen=True)
class CDM:
    w: int
    t: int
    entries: tuple[tuple[int, ...], ...]
    homogeneous: bool = True

    def row(self, r: int) -> tuple[int, ...]:
        return self.entries[r]

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.t, self.w)


def _is_perm(row: np.ndarray, w: int) -> bool:
    return np.array_equal(np.sort(row % w), np.arange(w))


def verify_cdm(D: CDM) -> bool:
    """Every row and every pairwise row difference is a permutation of Z_w."""
    a = D.as_array()
    if a.shape != (D.t, D.w):
        return False
    if not all(_is_perm(r, D.w) for r in a):
        return False
    return all(_is_perm(a[h] - a[r], D.w) for h in range(D.t) for r in range(h))


def build_homogeneous_cdm(w: int, t: int) -> CDM:
    """Rows i*j mod w for i = 1..t; needs w odd and lpf(w) > t."""
    if w < 1 or t < 1:
        raise PreconditionViolated(f"need w >= 1 and t >= 1, got w={w}, t={t}")
    if w % 2 == 0:
        raise PreconditionViolated(f"w={w} must be odd")
    lpf = least_prime_factor(w)
    if lpf is not None and lpf <= t:
        raise PreconditionViolated(f"least prime factor {lpf} of w={w} is not > t={t}")
    j = np.arange(w, dtype=np.int64)
    rows = tuple(tuple(int(x) for x in (i * j) % w) for i in range(1, t + 1))
    D = CDM(w, t, rows, True)
    if not verify_cdm(D):  # pragma: no cover - guarded by the precondition
        raise PreconditionViolated(f"rows 1..{t} mod {w} are not homogeneous")
    return D
