"""FHS sets, partial Hamming correlation, bounds and the strict-optimality verdict."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateParameters,
    FormatError,
    InternalInconsistency,
    NotPartitionType,
    SizeMismatch,
    WindowOutOfRange,
)
from .ntheory import ceil_div
from .packing import (
    NestedFamily,
    _header,
    di_from_sequences,
    sequences_of,
    verify_nested,
    verify_partition_type,
)

__all__ = [
    "FHSSet",
    "VerificationReport",
    "fhs_from_bncdp",
    "fhs_to_bncdp",
    "partial_hamming",
    "max_partial",
    "partial_profile",
    "peng_fan_lambda",
    "bound_partial",
    "check_strict_optimality",
    "fhs_to_text",
    "fhs_from_text",
    "report_lines",
    "structural_report",
]

# above this many (hit, window length) pairs the direct scan is skipped
SCAN_LIMIT = 3 * 10 ** 9


@dataclass(frozen=True)
class FHSSet:
    n: int
    M: int
    l: int
    sequences: tuple[tuple[int, ...], ...]
    lam: int = 0

    def __post_init__(self):
        seqs = tuple(tuple(int(x) for x in s) for s in self.sequences)
        object.__setattr__(self, "sequences", seqs)
        if self.n < 1 or self.M < 1 or self.l < 1:
            raise ValueError(f"need n, M, l >= 1, got {self.n}, {self.M}, {self.l}")
        if len(seqs) != self.M or any(len(s) != self.n for s in seqs):
            raise ValueError(f"expected {self.M} sequences of length {self.n}")
        bad = [x for s in seqs for x in s if not 0 <= x < self.l]
        if bad:
            raise ValueError(f"symbol {bad[0]} outside I_{self.l}")

    def as_array(self) -> np.ndarray:
        return np.array(self.sequences, dtype=np.int64).reshape(self.M, self.n)

    @property
    def params(self) -> tuple[int, int, int, int]:
        return self.n, self.M, self.lam, self.l


def fhs_from_bncdp(F: NestedFamily, l: int | None = None) -> FHSSet:
    """X_j(t) = index of the block of member j that contains t.

    Empty blocks are only accepted when the alphabet size is given.
    """
    if not verify_partition_type(F, allow_empty=l is not None):
        raise NotPartitionType("family is not partition-type"
                               + ("" if l is not None else " (or has empty blocks)"))
    if l is None:
        l = F.size
    elif l < F.size:
        raise SizeMismatch(f"alphabet size {l} is smaller than the block count {F.size}")
    seqs = sequences_of(F)
    return FHSSet(F.n, F.M, l, tuple(map(tuple, seqs.tolist())), F.lam)


def fhs_to_bncdp(S: FHSSet) -> NestedFamily:
    members = []
    for s in S.sequences:
        blocks = [[] for _ in range(S.l)]
        for t, x in enumerate(s):
            blocks[x].append(t)
        members.append(tuple(tuple(b) for b in blocks))
    return NestedFamily(S.n, tuple(members), "CDP", 1, S.lam)


# --- correlation ----------------------------------------------------------------

def partial_hamming(X: Sequence[int], Y: Sequence[int], tau: int, j: int, L: int) -> int:
    """sum_{t=j}^{j+L-1} [x(t) == y(t+tau)], indices mod n."""
    n = len(X)
    if len(Y) != n:
        raise WindowOutOfRange("sequences differ in length")
    if not 1 <= L <= n or not 0 <= tau < n or not 0 <= j < n:
        raise WindowOutOfRange(f"need 1 <= L <= {n} and 0 <= tau, j < {n}")
    return sum(X[t % n] == Y[(t + tau) % n] for t in range(j, j + L))


def _pairs(M: int):
    for x in range(M):
        for y in range(M):
            yield x, y


def max_partial(S: FHSSet, L: int) -> int:
    """H(S;L) by brute force over every start j, shift and pair."""
    n = S.n
    if not 1 <= L <= n:
        raise WindowOutOfRange(f"L={L} outside 1..{n}")
    seqs = S.as_array()
    t = np.arange(n)
    best = 0
    for x, y in _pairs(S.M):
        taus = np.arange(1 if x == y else 0, n)
        if taus.size == 0:
            continue
        hits = (seqs[x][None, :] == seqs[y][(t[None, :] + taus[:, None]) % n]).astype(np.int64)
        pre = np.concatenate([np.zeros((len(taus), 1), np.int64),
                              np.cumsum(np.concatenate([hits, hits], axis=1), axis=1)], axis=1)
        best = max(best, int((pre[:, L:L + n] - pre[:, :n]).max()))
    return best


def partial_profile(S: FHSSet) -> list[int]:
    """[H(S;1), ..., H(S;n)] by prefix-sum window counting.

    A window holding the most coincidences can always be slid right until it
    starts on a coincidence, so only those starts are evaluated.
    """
    n = S.n
    seqs = S.as_array()
    t = np.arange(n)
    Ls = np.arange(1, n + 1)
    H = np.zeros(n, dtype=np.int64)
    # rows are the (y, tau) shifts of every sequence; x is paired with each
    rows_per = max(1, 2_000_000 // (2 * n + 1))
    hit_batch = max(1, 4_000_000 // n)
    for x in range(S.M):
        keep = np.ones(S.M * n, dtype=bool)
        keep[x * n] = False                     # tau = 0 against itself
        idx = np.nonzero(keep)[0]
        for lo in range(0, idx.size, rows_per):
            ys, taus = np.divmod(idx[lo:lo + rows_per], n)
            block = seqs[ys[:, None], (t[None, :] + taus[:, None]) % n]
            hits = (block == seqs[x][None, :]).astype(np.int32)
            r, c = np.nonzero(hits)
            if r.size == 0:
                continue
            pre = np.zeros((hits.shape[0], 2 * n + 1), dtype=np.int32)
            np.cumsum(np.concatenate([hits, hits], axis=1), axis=1, out=pre[:, 1:])
            for h0 in range(0, r.size, hit_batch):
                rr, cc = r[h0:h0 + hit_batch], c[h0:h0 + hit_batch]
                vals = pre[rr[:, None], cc[:, None] + Ls[None, :]] - pre[rr, cc][:, None]
                np.maximum(H, vals.max(axis=0), out=H)
    return [int(h) for h in H]


# --- bounds -----------------------------------------------------------------------

def _check_params(n: int, M: int, l: int) -> None:
    if n < 1 or M < 1 or l < 1:
        raise DegenerateParameters(f"need n, M, l >= 1, got ({n}, {M}, {l})")
    if n * M < l:
        raise DegenerateParameters(f"nM = {n * M} < l = {l}")
    if n * M == 1:
        raise DegenerateParameters("nM = 1 leaves the bound undefined")


def peng_fan_lambda(n: int, M: int, l: int) -> int:
    """ceil((2InM - (I+1)Il) / ((nM-1)M)) with I = floor(nM/l); equals the other form."""
    _check_params(n, M, l)
    nm = n * M
    I = nm // l
    inner3 = ceil_div(2 * I * nm - (I + 1) * I * l, (nm - 1) * M)
    inner2 = ceil_div((nm - l) * n, (nm - 1) * l)
    if inner2 != inner3:
        raise InternalInconsistency(f"bound forms disagree: {inner2} vs {inner3}")
    return inner3


def bound_partial(n: int, M: int, l: int, L: int) -> int:
    if not 1 <= L <= n:
        raise WindowOutOfRange(f"L={L} outside 1..{n}")
    return ceil_div(L * peng_fan_lambda(n, M, l), n)


# --- verdict ------------------------------------------------------------------------

@dataclass
class VerificationReport:
    n: int
    M: int
    l: int
    I: int
    lambda_formula: int
    bounds: list[int]
    H: list[int] | None            # None when the direct scan was skipped
    di: list[int]
    index_ok: bool
    di_ok: bool
    direct_verdict: bool | None
    char_verdict: bool
    notes: list[str] = field(default_factory=list)

    @property
    def meets(self) -> list[bool] | None:
        if self.H is None:
            return None
        return [h == b for h, b in zip(self.H, self.bounds)]

    @property
    def strictly_optimal(self) -> bool:
        return self.char_verdict if self.direct_verdict is None else self.direct_verdict

    def first_gap(self) -> int | None:
        m = self.meets
        if m is None:
            return None
        return next((L for L, ok in enumerate(m, 1) if not ok), None)


def check_strict_optimality(S: FHSSet, scan: bool | None = None) -> VerificationReport:
    """Two verdicts: the window scan and the d_i characterization. They must agree."""
    n, M, l = S.n, S.M, S.l
    lam = peng_fan_lambda(n, M, l)
    I = n * M // l
    bounds = [ceil_div(L * lam, n) for L in range(1, n + 1)]

    F = fhs_to_bncdp(S).with_(lam=lam)
    index_ok = verify_nested(F).ok
    seqs = S.as_array()
    di = di_from_sequences(seqs, lam) if lam > 0 else []
    di_ok = all(d >= (n * i) // lam for i, d in enumerate(di, 1))
    char = index_ok and di_ok

    notes = []
    if scan is None:
        hits = sum(int(np.sum(np.bincount(seqs[x], minlength=l) * np.bincount(seqs[y], minlength=l)))
                   for x, y in _pairs(M))
        scan = hits * n <= SCAN_LIMIT
        if not scan:
            notes.append("direct scan skipped: beyond size limit")
    H = partial_profile(S) if scan else None
    direct = None if H is None else all(h == b for h, b in zip(H, bounds))
    if direct is not None and direct != char:
        raise InternalInconsistency(
            f"window scan says {'yes' if direct else 'no'} but d_i characterization says "
            f"{'yes' if char else 'no'} (index_ok={index_ok}, di={di})")
    return VerificationReport(n, M, l, I, lam, bounds, H, di, index_ok, di_ok,
                              direct, char, notes)


def report_lines(R: VerificationReport, per_window: bool = True) -> list[str]:
    out = []
    if R.H is not None:
        for L, (h, b) in enumerate(zip(R.H, R.bounds), 1):
            ok = h == b
            if per_window or not ok:
                out.append(f"L={L} H={h} bound={b} {'MEET' if ok else 'GAP'}")
    out.append(f"STRICT={'yes' if R.strictly_optimal else 'no'}")
    return out


# --- text format ----------------------------------------------------------------------

def fhs_to_text(S: FHSSet) -> str:
    lines = [f"FHS n={S.n} M={S.M} l={S.l} lambda={S.lam}"]
    lines += [" ".join(map(str, s)) for s in S.sequences]
    return "\n".join(lines) + "\n"


def fhs_from_text(text: str) -> FHSSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty FHS file")
    kv = _header(lines[0], "FHS", ("n", "M", "l", "lambda"))
    try:
        n, M, l, lam = (int(kv[k]) for k in ("n", "M", "l", "lambda"))
        seqs = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
    except ValueError as exc:
        raise FormatError(f"non-integer field: {exc}") from None
    if len(seqs) != M:
        raise FormatError(f"header says M={M}, found {len(seqs)} sequences")
    try:
        return FHSSet(n, M, l, tuple(seqs), lam)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def structural_report(S: FHSSet, note: str) -> VerificationReport:
    """Index and d_i floors against the set's own index, for sets whose bound is undefined."""
    n, M, l, lam = S.n, S.M, S.l, S.lam
    F = fhs_to_bncdp(S)
    index_ok = verify_nested(F).ok
    di = di_from_sequences(S.as_array(), lam) if lam > 0 else []
    di_ok = all(d >= (n * i) // lam for i, d in enumerate(di, 1))
    return VerificationReport(n, M, l, n * M // l, 0, [], None, di, index_ok, di_ok,
                              None, False, [note])
