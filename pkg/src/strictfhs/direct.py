"""Direct constructions: trace (A), discrete log (B) and cyclotomic families."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd, prod

import numpy as np
from sympy.ntheory import primitive_root
from sympy.ntheory.modular import crt

from .cyclic import crt_split
from .errors import (
    ConstructionFailed,
    InternalVerificationFailed,
    ParamViolation,
    RangeExceeded,
    RepresentativeGapMismatch,
)
from .galois import MAX_ORDER, FiniteField, field_create, field_of_order
from .ntheory import factorize, is_prime, prime_power
from .packing import NestedFamily, certify

__all__ = [
    "TraceConstructionContext",
    "construct_trace_bncrdp",
    "construct_trace_fhs_family",
    "trace_census",
    "extend_with_zero_block",
    "construct_log_bncdp",
    "construct_log_bncrdp",
    "construct_cyclotomic_bncrdp",
    "construct_iterated_log_bncrdp",
    "log_subspace",
]


# --- Construction A -----------------------------------------------------------

@dataclass
class TraceConstructionContext:
    q: int
    m: int
    d: int
    field: FiniteField
    n: int                       # (q^m - 1) / d
    coset_step: int              # (q^m - 1) / (q - 1)
    a: tuple[int, ...]           # a_1..a_{m-1} as field elements
    G: tuple[int, ...]           # {beta^(jd)}
    R: tuple[tuple[int, ...], ...]
    offsets: tuple[int, ...]     # s_i
    A: list[dict[tuple[int, ...], tuple[int, ...]]] = field(repr=False)
    census: dict[tuple[int, ...], int] = field(repr=False)

    def scale(self, c: int, b: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(self.field.mul(c, x) for x in b)


def _check_trace_params(q: int, m: int, d: int, strict: bool = True) -> None:
    if prime_power(q) is None:
        raise ParamViolation(f"q={q} is not a prime power")
    if m < 2:
        raise ParamViolation(f"need m >= 2, got m={m}")
    if d < 1 or (q - 1) % d:
        raise ParamViolation(f"d={d} does not divide q-1={q - 1}")
    if strict and gcd(m, d) != 1:
        raise ParamViolation(f"gcd(m, d) = gcd({m}, {d}) != 1")
    if q ** m > MAX_ORDER:
        raise RangeExceeded(f"q^m = {q ** m} exceeds {MAX_ORDER}")


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [r[:] for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                c = rows[r][col]
                rows[r] = [(x - c * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _trace_sets(q: int, m: int, d: int, strict: bool = True) -> TraceConstructionContext:
    _check_trace_params(q, m, d, strict)
    F = field_of_order(q ** m)
    Q = F.q
    n = (Q - 1) // d
    step = (Q - 1) // (q - 1)
    a = tuple(F.alpha_pow(k) for k in range(1, m))
    # alpha..alpha^(m-1) are independent over GF(q), in fact over GF(p)
    if _rank_mod_p([F.coeffs(x) for x in a], F.p) != m - 1:
        raise InternalVerificationFailed("a_1..a_{m-1} are not linearly independent")

    tr = F.trace_of_powers(q)
    t = np.arange(n, dtype=np.int64)
    k = np.arange(1, m, dtype=np.int64)
    A: list[dict[tuple[int, ...], list[int]]] = []
    for i in range(d):
        vecs = tr[(i + k[None, :] + d * t[:, None]) % (Q - 1)]
        groups: dict[tuple[int, ...], list[int]] = {}
        for tt, row in enumerate(vecs.tolist()):
            groups.setdefault(tuple(row), []).append(tt)
        A.append(groups)

    sub = sorted(F.subfield(q))
    beta = F.alpha_pow(step)
    G = tuple(F.pow(beta, j * d) for j in range((q - 1) // d))
    zero = (0,) * (m - 1)
    seen: set[tuple[int, ...]] = set()
    R = []
    for b in product(sub, repeat=m - 1):
        if b == zero or b in seen:
            continue
        R.append(b)
        seen.update(tuple(F.mul(g, x) for x in b) for g in G)
    if len(R) != d * (q ** (m - 1) - 1) // (q - 1):
        raise InternalVerificationFailed(f"|R| = {len(R)} has the wrong size")

    offsets = []
    for i in range(d if strict else 0):
        a0 = A[i].get(zero, [])
        if not a0:
            raise InternalVerificationFailed(f"A^{i}_0 is empty")
        s_i = a0[0]
        if a0 != [s_i + j * step for j in range((q - 1) // d)]:
            raise InternalVerificationFailed(f"A^{i}_0 = {a0} is not a coset of {step}Z")
        offsets.append(s_i)

    census = {b: sum(len(A[i].get(b, ())) for i in range(d)) for b in product(sub, repeat=m - 1)}
    return TraceConstructionContext(
        q, m, d, F, n, step, a, G, tuple(R), tuple(offsets),
        [{b: tuple(v) for b, v in g.items()} for g in A], census)


def trace_census(q: int, m: int, d: int) -> dict[tuple[int, ...], int]:
    """Sigma_i |A^i_b| for every b in GF(q)^{m-1}.

    The count only depends on the trace map, so gcd(m, d) = 1 is not needed.
    """
    return _trace_sets(q, m, d, strict=False).census


def construct_trace_bncrdp(q: int, m: int, d: int) -> tuple[NestedFamily, TraceConstructionContext]:
    """(q^m-1)/d-modulus BNCRDP of size d(q^{m-1}-1)/(q-1), one CRDP per i < d."""
    ctx = _trace_sets(q, m, d)
    n = ctx.n
    members = []
    for i in range(d):
        s_i = ctx.offsets[i]
        members.append(tuple(tuple((x - s_i) % n for x in ctx.A[i].get(b, ()))
                             for b in ctx.R))
    F = NestedFamily(n, tuple(members), "CRDP", (q - 1) // d, 1,
                     rep_modulus=ctx.coset_step, rep_missing=(0,))
    return certify(F, "trace_bncrdp", {"q": q, "m": m, "d": d}), ctx


def construct_trace_fhs_family(q: int, m: int, d: int) -> NestedFamily:
    """Partition-type family {A^i_b : b in GF(q)^{m-1}}: the classical trace FHS set.

    Its index is (q-1)/d; blocks are ordered by b in lex order of the
    encoded coordinates, so b = 0 is block 0.
    """
    ctx = _trace_sets(q, m, d)
    keys = sorted(ctx.census)
    members = tuple(tuple(ctx.A[i].get(b, ()) for b in keys) for i in range(d))
    F = NestedFamily(ctx.n, members, "CDP", 1, (q - 1) // d)
    return certify(F, "trace_fhs_family", {"q": q, "m": m, "d": d})


def extend_with_zero_block(F: NestedFamily) -> NestedFamily:
    """Add {0} to every member of a BNCRDP whose elements miss only the 0 coset."""
    c = F.rep_modulus
    if F.kind != "CRDP" or c <= 0 or F.rep_missing != (0,):
        raise RepresentativeGapMismatch(
            f"need a BNCRDP whose representatives miss exactly the 0 coset, "
            f"got kind={F.kind} rep_modulus={c} missing={F.rep_missing}")
    for j in range(F.M):
        if any(e % c == 0 for e in F.member_elements(j)):
            raise RepresentativeGapMismatch(f"member {j} already meets the 0 coset mod {c}")
    members = tuple(m + ((0,),) for m in F.members)
    out = NestedFamily(F.n, members, "CDP", 1, F.lam, rep_modulus=c, rep_missing=())
    return certify(out, "extend_with_zero_block", {}, [F])


# --- Construction B -------------------------------------------------------------

def log_subspace(F: FiniteField) -> list[int]:
    """R = {sum_{i=1}^{m-1} a_i alpha^i}, indexed by sum a_i p^(i-1)."""
    p, m = F.p, F.k
    basis = [F.alpha_pow(i) for i in range(1, m)]
    out = []
    for idx in range(p ** (m - 1)):
        x, r = 0, idx
        for b in basis:
            r, a = divmod(r, p)
            for _ in range(a):
                x = F.add(x, b)
        out.append(x)
    return out


def _check_log_params(p: int, m: int) -> None:
    if not is_prime(p):
        raise ParamViolation(f"p={p} is not prime")
    if m < 2:
        raise ParamViolation(f"need m > 1, got m={m}")
    if p ** m > MAX_ORDER:
        raise RangeExceeded(f"p^m = {p ** m} exceeds {MAX_ORDER}")


def _log_members(p: int, m: int) -> tuple[list[list[list[int]]], int, object]:
    F = field_create(p, m)
    R = log_subspace(F)
    crt_map = crt_split(F.q - 1, p)
    members = []
    for x in R:
        blocks = []
        for y in R:
            blk = []
            for b in range(p):
                z = F.sub(F.sub(y, x), b)
                if z:
                    blk.append(crt_map.join(F.log(z), b))
            blocks.append(blk)
        members.append(blocks)
    return members, F.q - 1, crt_map


def construct_log_bncdp(p: int, m: int) -> NestedFamily:
    """p^{m-1} CDPs over Z_{p(p^m-1)} from A^x_y = {(a, b) : alpha^a + b + x = y}."""
    _check_log_params(p, m)
    members, c, _ = _log_members(p, m)
    F = NestedFamily(p * c, tuple(tuple(tuple(b) for b in mem) for mem in members),
                     "CDP", 1, 1, rep_modulus=c, rep_missing=())
    return certify(F, "log_bncdp", {"p": p, "m": m})


def construct_log_bncrdp(p: int, m: int) -> NestedFamily:
    """The log BNCDP with (0, p-1) removed from A^x_x; forbidden subgroup (p^m-1)Z."""
    _check_log_params(p, m)
    members, c, crt_map = _log_members(p, m)
    drop = crt_map.join(0, p - 1)
    for xi, mem in enumerate(members):
        if drop not in mem[xi]:
            raise InternalVerificationFailed(f"(0, p-1) missing from A^x_x for member {xi}")
        mem[xi].remove(drop)
    F = NestedFamily(p * c, tuple(tuple(tuple(b) for b in mem) for mem in members),
                     "CRDP", p, 1, rep_modulus=c, rep_missing=(0,))
    return certify(F, "log_bncrdp", {"p": p, "m": m})


# --- cyclotomic family --------------------------------------------------------

def cyclotomic_f(v: int, e: int) -> int:
    return min((p - 1) // e for p in factorize(v))


def construct_cyclotomic_bncrdp(v: int, u: int, e: int) -> NestedFamily:
    """f CRDPs over Z_{uv} relative to vZ_{uv}, each with (v-1)/e blocks of size e.

    In Z_u x Z_v the block for orbit representative c in member t is
    {(j u/e, c h^j w^t) : 0 <= j < e}, where h has order e modulo every
    prime power of v and w is a primitive root modulo each of them.
    """
    if v < 3 or v % 2 == 0:
        raise ParamViolation(f"v={v} must be an odd integer > 1")
    if e < 2:
        raise ParamViolation(f"need e > 1, got e={e}")
    if u < 1 or u % e:
        raise ParamViolation(f"e={e} does not divide u={u}")
    if gcd(u, v) != 1:
        raise ParamViolation(f"gcd(u, v) = gcd({u}, {v}) != 1")
    fac = factorize(v)
    bad = [p for p in fac if (p - 1) % e]
    if bad:
        raise ParamViolation(f"e={e} does not divide p-1 for primes {bad} of v")
    f = cyclotomic_f(v, e)

    mods, hs, ws = [], [], []
    for p, k in fac.items():
        P = p ** k
        g = primitive_root(P)
        mods.append(P)
        hs.append(pow(g, (p - 1) * p ** (k - 1) // e, P))
        ws.append(g)
    h = int(crt(mods, hs)[0]) % v
    w = int(crt(mods, ws)[0]) % v
    if pow(h, e, v) != 1 or any(gcd(pow(h, j, v) - 1, v) != 1 for j in range(1, e)):
        raise ConstructionFailed(f"no usable multiplier of order {e} mod {v}")

    orbits = []
    seen = set()
    for c in range(1, v):
        if c in seen:
            continue
        orb = [c * pow(h, j, v) % v for j in range(e)]
        seen.update(orb)
        orbits.append(c)
    if len(orbits) != (v - 1) // e:
        raise ConstructionFailed("orbit count mismatch")

    cmap = crt_split(u, v)
    members = []
    for t in range(f):
        wt = pow(w, t, v)
        members.append(tuple(
            tuple(cmap.join(j * (u // e), c * pow(h, j, v) * wt % v) for j in range(e))
            for c in orbits))
    F = NestedFamily(u * v, tuple(members), "CRDP", u, 1, rep_modulus=v, rep_missing=(0,))
    return certify(F, "cyclotomic_bncrdp", {"v": v, "u": u, "e": e})


# --- iterated log family ------------------------------------------------------

def construct_iterated_log_bncrdp(p: int, us) -> NestedFamily:
    """(p y, p, ..., 1)-BNCRDP with y = prod(p^u_i - 1), built by induction on the u-list."""
    from .recursive import compose_on_subgroup, expand_by_log_crdp

    us = [int(x) for x in us]
    if not us:
        raise ParamViolation("need at least one exponent")
    if any(a > b for a, b in zip(us, us[1:])):
        raise ParamViolation(f"exponents must be nondecreasing, got {us}")
    if any(x < 2 for x in us):
        raise ParamViolation(f"every exponent must be > 1, got {us}")
    n_final = p * prod(p ** x - 1 for x in us)
    if n_final > 10 ** 7:
        raise RangeExceeded(f"modulus {n_final} is beyond desk scale")
    fam = construct_log_bncrdp(p, us[0])
    for x in us[1:]:
        outer = expand_by_log_crdp(fam, p ** x)
        inner = construct_log_bncrdp(p, x)
        fam = compose_on_subgroup(outer, inner)
    return fam
