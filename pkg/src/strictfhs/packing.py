"""Cyclic difference packings and balanced nested families of them.

A family is stored as M members, each an ordered tuple of blocks (sorted
tuples of residues mod n). Blocks are aligned by position across members,
which is what the external-difference condition pairs up. Empty blocks are
kept as placeholders so that alignment survives constructions that delete
elements.
"""

from __future__ import annotations

import hashlib
from functools import lru_cache
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import FormatError, NotPartitionType, SizeMismatch

__all__ = [
    "Packing",
    "NestedFamily",
    "ExpansionCertificate",
    "VerifyResult",
    "verify_packing",
    "verify_nested",
    "verify_partition_type",
    "verify_representatives",
    "compute_di",
    "di_from_sequences",
    "certify",
    "is_certified",
    "to_text",
    "from_text",
    "digest",
]

Blocks = tuple[tuple[int, ...], ...]


def _norm_blocks(blocks: Iterable[Iterable[int]], n: int) -> Blocks:
    out = []
    for b in blocks:
        els = sorted(int(e) % n for e in b)
        if len(set(els)) != len(els):
            raise ValueError(f"repeated element in block {els} mod {n}")
        out.append(tuple(els))
    return tuple(out)


@dataclass(frozen=True)
class Packing:
    """A CDP (forbidden_order 1) or CRDP over Z_n.

    The forbidden subgroup of a CRDP is (n/g)Z_n, of order g = forbidden_order.
    """

    n: int
    blocks: Blocks
    kind: str = "CDP"
    forbidden_order: int = 1
    lam: int = 1

    def __post_init__(self):
        object.__setattr__(self, "blocks", _norm_blocks(self.blocks, self.n))
        if self.kind not in ("CDP", "CRDP"):
            raise ValueError(f"unknown packing kind {self.kind!r}")
        if self.n % self.forbidden_order:
            raise ValueError(f"forbidden order {self.forbidden_order} does not divide {self.n}")

    @property
    def size(self) -> int:
        return len(self.blocks)

    @property
    def elements(self) -> list[int]:
        return [e for b in self.blocks for e in b]

    @property
    def block_sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]


@dataclass(frozen=True)
class ExpansionCertificate:
    operation: str
    params: tuple[tuple[str, object], ...]
    input_digests: tuple[str, ...]
    output_digest: str
    verdict: str

    def line(self) -> str:
        ps = " ".join(f"{k}={v}" for k, v in self.params)
        ins = ",".join(d[:12] for d in self.input_digests) or "-"
        return f"{self.operation} [{ps}] in={ins} out={self.output_digest[:12]} verdict={self.verdict}"


@dataclass(frozen=True)
class NestedFamily:
    """M aligned packings sharing modulus, kind, forbidden subgroup and index.

    rep_modulus/rep_missing record the representative property: the members'
    elements, reduced mod rep_modulus, hit every residue outside rep_missing
    exactly once. rep_modulus 0 means no such property is claimed.
    """

    n: int
    members: tuple[Blocks, ...]
    kind: str = "CDP"
    forbidden_order: int = 1
    lam: int = 1
    rep_modulus: int = 0
    rep_missing: tuple[int, ...] = ()
    certificates: tuple[ExpansionCertificate, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "members",
                           tuple(_norm_blocks(m, self.n) for m in self.members))
        object.__setattr__(self, "rep_missing", tuple(sorted(set(self.rep_missing))))
        if self.kind not in ("CDP", "CRDP"):
            raise ValueError(f"unknown family kind {self.kind!r}")

    @property
    def M(self) -> int:
        return len(self.members)

    @property
    def size(self) -> int:
        return len(self.members[0]) if self.members else 0

    def packing(self, j: int) -> Packing:
        return Packing(self.n, self.members[j], self.kind, self.forbidden_order, self.lam)

    def member_elements(self, j: int) -> list[int]:
        return [e for b in self.members[j] for e in b]

    def column_sums(self) -> list[int]:
        """Sigma_j |B_i^j| for each block position i."""
        return [sum(len(m[i]) for m in self.members) for i in range(self.size)]

    def with_(self, **kw) -> "NestedFamily":
        return replace(self, **kw)


@dataclass
class VerifyResult:
    ok: bool
    violations: list[str]

    def __bool__(self):
        return self.ok


# --- difference counting ----------------------------------------------------

@lru_cache(maxsize=512)
def _padded(blocks: Blocks) -> tuple[np.ndarray, np.ndarray]:
    # cached: verify_nested pairs every member with every other one
    width = max((len(b) for b in blocks), default=0)
    arr = np.zeros((len(blocks), max(width, 1)), dtype=np.int64)
    mask = np.zeros_like(arr, dtype=bool)
    for i, b in enumerate(blocks):
        arr[i, :len(b)] = b
        mask[i, :len(b)] = True
    return arr, mask


def _diff_counts(xs: Blocks, ys: Blocks, n: int, internal: bool) -> np.ndarray:
    """Counts over Z_n of y - x for (x, y) in X_i x Y_i summed over positions i.

    With internal=True, xs and ys are the same member and x == y is skipped.
    """
    if not xs:
        return np.zeros(n, dtype=np.int64)
    ax, mx = _padded(xs)
    ay, my = _padded(ys)
    # keep the intermediate (u, K, K) tensor bounded
    counts = np.zeros(n, dtype=np.int64)
    u, k1, k2 = ax.shape[0], ax.shape[1], ay.shape[1]
    step = max(1, 4_000_000 // max(1, k1 * k2))
    for lo in range(0, u, step):
        sx, sy = ax[lo:lo + step], ay[lo:lo + step]
        d = (sy[:, None, :] - sx[:, :, None]) % n
        ok = mx[lo:lo + step, :, None] & my[lo:lo + step, None, :]
        if internal:
            ok &= ~np.eye(k1, k2, dtype=bool)[None]
        counts += np.bincount(d[ok], minlength=n)
    return counts


def _forbidden(n: int, g: int) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    mask[:: n // g] = True
    return mask


def _check_counts(counts: np.ndarray, n: int, g: int, lam: int, kind: str,
                  allow_zero: bool, label: str) -> list[str]:
    out = []
    if kind == "CRDP":
        bad_forb = np.nonzero(_forbidden(n, g) & (counts > 0))[0]
        for r in bad_forb:
            out.append(f"{label}: forbidden residue {r} occurs {counts[r]} times")
        allowed = ~_forbidden(n, g)
    else:
        allowed = np.ones(n, dtype=bool)
        if not allow_zero:
            allowed[0] = False
            if counts[0]:
                out.append(f"{label}: residue 0 occurs {counts[0]} times")
    for r in np.nonzero(allowed & (counts > lam))[0]:
        out.append(f"{label}: residue {r} occurs {counts[r]} times (> {lam})")
    return out


def verify_packing(P: Packing) -> VerifyResult:
    counts = _diff_counts(P.blocks, P.blocks, P.n, internal=True)
    v = _check_counts(counts, P.n, P.forbidden_order, P.lam, P.kind, False, "internal")
    return VerifyResult(not v, v)


def verify_nested(F: NestedFamily) -> VerifyResult:
    sizes = {len(m) for m in F.members}
    if len(sizes) > 1:
        raise SizeMismatch(f"members have unequal block counts {sorted(sizes)}")
    v: list[str] = []
    for j in range(F.M):
        res = verify_packing(F.packing(j))
        v += [f"member {j} {s}" for s in res.violations]
    for j in range(F.M):
        for jj in range(F.M):
            if j == jj:
                continue
            counts = _diff_counts(F.members[j], F.members[jj], F.n, internal=False)
            v += _check_counts(counts, F.n, F.forbidden_order, F.lam, F.kind, True,
                               f"external ({j},{jj})")
    return VerifyResult(not v, v)


def verify_partition_type(F: NestedFamily, allow_empty: bool = False) -> bool:
    if F.kind != "CDP":
        return False
    for m in F.members:
        if not allow_empty and any(len(b) == 0 for b in m):
            return False
        els = [e for b in m for e in b]
        if len(els) != F.n or len(set(els)) != F.n:
            return False
    return True


def verify_representatives(F: NestedFamily) -> VerifyResult:
    c = F.rep_modulus
    if c <= 0:
        return VerifyResult(False, ["no representative property declared"])
    if F.n % c:
        return VerifyResult(False, [f"rep modulus {c} does not divide {F.n}"])
    target = set(range(c)) - set(F.rep_missing)
    v = []
    for j in range(F.M):
        residues = [e % c for e in F.member_elements(j)]
        counts = np.bincount(residues, minlength=c) if residues else np.zeros(c, int)
        for r in range(c):
            want = 1 if r in target else 0
            if counts[r] != want:
                v.append(f"member {j}: residue {r} mod {c} hit {counts[r]} times (want {want})")
    return VerifyResult(not v, v)


# --- d_i machinery ----------------------------------------------------------

def sequences_of(F: NestedFamily, allow_empty: bool = True) -> np.ndarray:
    """M x n matrix with X_j(t) = index of the block of member j containing t."""
    if not verify_partition_type(F, allow_empty=allow_empty):
        raise NotPartitionType("family is not partition-type")
    seqs = np.empty((F.M, F.n), dtype=np.int64)
    for j, m in enumerate(F.members):
        for i, b in enumerate(m):
            seqs[j, list(b)] = i
    return seqs


def _coincidences(seqs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All coincidences X(a) = Y(a + tau), grouped by (X, Y, tau).

    Returns (key, a) sorted by key then a, where key = (x*M + y)*n + tau;
    the pair X = Y with tau = 0 is left out. Built symbol by symbol, so the
    cost is the number of coincidences rather than M^2 n^2.
    """
    M, n = seqs.shape
    flat = seqs.ravel()
    order = np.argsort(flat, kind="stable")
    sym = flat[order]
    bounds = np.flatnonzero(np.diff(sym)) + 1
    keys, starts = [], []
    for grp in np.split(order, bounds):
        seq_id, pos = np.divmod(grp, n)
        kx, ky = seq_id[:, None], seq_id[None, :]
        tau = (pos[None, :] - pos[:, None]) % n
        key = (kx * M + ky) * n + tau
        a = np.broadcast_to(pos[:, None], key.shape)
        keep = ~((kx == ky) & (tau == 0))
        keys.append(key[keep])
        starts.append(a[keep])
    if not keys:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    key = np.concatenate(keys)
    a = np.concatenate(starts)
    idx = np.lexsort((a, key))
    return key[idx], a[idx]


def di_from_sequences(seqs: np.ndarray, lam: int) -> list[int]:
    """d_1..d_lam from the sorted coincidence positions of every (X, Y, tau).

    For a list D of size u, the i-apart differences are taken cyclically
    (a wrap to the same point counts as n) and only when i <= u.
    """
    seqs = np.asarray(seqs)
    M, n = seqs.shape
    if lam <= 0:
        return []
    best = np.full(lam, n, dtype=np.int64)
    key, a = _coincidences(seqs)
    if key.size == 0:
        return [int(v) for v in best]
    first = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
    size = np.diff(np.r_[first, key.size])
    grp = np.repeat(np.arange(first.size), size)
    start, u = first[grp], size[grp]
    pos = np.arange(key.size) - start
    for i in range(1, lam + 1):
        f = np.flatnonzero(u >= i)
        if f.size == 0:
            break
        d = (a[start[f] + (pos[f] + i) % u[f]] - a[f]) % n
        d[d == 0] = n
        best[i - 1] = min(best[i - 1], int(d.min()))
    return [int(v) for v in best]


def compute_di(F: NestedFamily, lam: int | None = None) -> list[int]:
    seqs = sequences_of(F)
    return di_from_sequences(seqs, F.lam if lam is None else lam)


# --- text format and certification --------------------------------------------

def to_text(F: NestedFamily) -> str:
    lines = [f"PACKING n={F.n} kind={F.kind} g={F.forbidden_order} "
             f"lambda={F.lam} members={F.M}"]
    for j, m in enumerate(F.members):
        if j:
            lines.append("--")
        lines += [" ".join(map(str, b)) for b in m]
    return "\n".join(lines) + "\n"


def _header(line: str, tag: str, keys: Sequence[str]) -> dict[str, str]:
    parts = line.split()
    if not parts or parts[0] != tag:
        raise FormatError(f"expected '{tag}' header, got {line!r}")
    kv = {}
    for tok in parts[1:]:
        if "=" not in tok:
            raise FormatError(f"malformed header field {tok!r}")
        k, v = tok.split("=", 1)
        kv[k] = v
    missing = [k for k in keys if k not in kv]
    if missing:
        raise FormatError(f"header missing {missing}")
    return kv


def from_text(text: str) -> NestedFamily:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty packing file")
    kv = _header(lines[0], "PACKING", ("n", "kind", "g", "lambda", "members"))
    try:
        n, g, lam, M = (int(kv[k]) for k in ("n", "g", "lambda", "members"))
        members: list[list[tuple[int, ...]]] = [[]]
        for ln in lines[1:]:
            if ln.strip() == "--":
                members.append([])
            else:
                members[-1].append(tuple(int(x) for x in ln.split()))
    except ValueError as exc:
        raise FormatError(f"non-integer field: {exc}") from None
    if len(members) != M:
        raise FormatError(f"header says {M} members, found {len(members)}")
    for m in members:
        for b in m:
            if any(not 0 <= e < n for e in b):
                raise FormatError(f"element out of range in block {b}")
    try:
        return NestedFamily(n, tuple(tuple(m) for m in members), kv["kind"], g, lam)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def digest(F: NestedFamily) -> str:
    return hashlib.sha256(to_text(F).encode()).hexdigest()


def full_check(F: NestedFamily, require_rep: bool = True) -> list[str]:
    v = list(verify_nested(F).violations)
    if require_rep and F.rep_modulus:
        v += verify_representatives(F).violations
    return v


def certify(F: NestedFamily, operation: str, params: dict | None = None,
            inputs: Sequence[NestedFamily] = ()) -> NestedFamily:
    """Verify F and return it with a passing certificate appended.

    Raises InternalVerificationFailed when the verifier rejects F.
    """
    from .errors import InternalVerificationFailed

    v = full_check(F)
    if v:
        head = "; ".join(v[:5])
        raise InternalVerificationFailed(f"{operation} produced an invalid family: {head}"
                                         + (f" (+{len(v) - 5} more)" if len(v) > 5 else ""))
    cert = ExpansionCertificate(
        operation=operation,
        params=tuple(sorted((params or {}).items())),
        input_digests=tuple(digest(x) for x in inputs),
        output_digest=digest(F),
        verdict="pass",
    )
    prior = tuple(dict.fromkeys(c for x in inputs for c in x.certificates))
    return replace(F, certificates=prior + (cert,))


def is_certified(F: NestedFamily) -> bool:
    return bool(F.certificates) and F.certificates[-1].verdict == "pass" \
        and F.certificates[-1].output_digest == digest(F)
