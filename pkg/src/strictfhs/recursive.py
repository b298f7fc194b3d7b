"""Recursive expansions: subgroup composition, translates, filling, CDM and log."""

from __future__ import annotations

from math import gcd

from .cdm import CDM, verify_cdm
from .errors import (
    CDMTooSmall,
    DiFloorViolated,
    FieldTooSmall,
    GcdViolation,
    InternalVerificationFailed,
    RepresentativeViolation,
    StructureMismatch,
    UncertifiedInput,
)
from .galois import field_of_order
from .ntheory import prime_power
from .packing import (
    NestedFamily,
    certify,
    compute_di,
    is_certified,
    verify_partition_type,
)

__all__ = [
    "compose_on_subgroup",
    "expand_by_translates",
    "fill_with_bncdp",
    "expand_by_cdm",
    "expand_by_log_crdp",
    "expand_by_log_cdp",
    "trivial_partition",
    "truncate",
]


def _require_certified(*fams: NestedFamily) -> None:
    for F in fams:
        if not is_certified(F):
            raise UncertifiedInput("input family carries no passing certificate")


def truncate(F: NestedFamily, M: int) -> NestedFamily:
    """Keep the first M members; a sub-family of a balanced nested family is one too."""
    if M > F.M:
        raise StructureMismatch(f"need {M} members, family has only {F.M}")
    if M == F.M:
        return F
    out = F.with_(members=F.members[:M], certificates=())
    return certify(out, "truncate", {"M": M}, [F])


def _check_partition(F: NestedFamily, op: str) -> None:
    if not verify_partition_type(F, allow_empty=True):
        raise InternalVerificationFailed(f"{op} output is not partition-type")


def _check_floor(di: list[int], unit: int, op: str) -> None:
    bad = [(i, d) for i, d in enumerate(di, 1) if d < i * unit]
    if bad:
        raise DiFloorViolated(f"{op}: d_i below i*{unit} at {bad[:5]}")


def trivial_partition(g: int, M: int) -> NestedFamily:
    """M copies of the single block Z_g, index g; d_i = i."""
    F = NestedFamily(g, tuple(((tuple(range(g)),),) * M), "CDP", 1, g)
    return certify(F, "trivial_partition", {"g": g, "M": M})


def compose_on_subgroup(outer: NestedFamily, inner: NestedFamily) -> NestedFamily:
    """Place g2*inner on the subgroup g2 Z of outer's modulus, next to outer's blocks.

    outer: (m g1 g2, m g1)-BNCRDP whose elements with 0, g2, ... cover the
    cosets of (m g1 g2 / s)Z; inner: (m g1, m)-BNCRDP whose elements with
    0, g1, ... cover the cosets of (m g1 / s)Z.
    """
    _require_certified(outer, inner)
    if outer.kind != "CRDP" or inner.kind != "CRDP":
        raise StructureMismatch("both families must be BNCRDPs")
    if outer.lam != 1 or inner.lam != 1:
        raise StructureMismatch("both families must have index 1")
    n_out, n_in = outer.n, inner.n
    if n_out % n_in or outer.forbidden_order != n_in:
        raise StructureMismatch(
            f"outer forbidden order {outer.forbidden_order} must equal inner modulus {n_in}")
    g2 = n_out // n_in
    m = inner.forbidden_order
    g1 = n_in // m
    c_out = outer.rep_modulus
    if c_out <= 0 or n_out % c_out:
        raise RepresentativeViolation("outer family lacks a representative property")
    s = n_out // c_out
    if m % s:
        raise StructureMismatch(f"s={s} does not divide m={m}")
    if outer.rep_missing != tuple(k * g2 for k in range(c_out // g2)):
        raise RepresentativeViolation(f"outer must miss exactly the multiples of {g2} mod {c_out}")
    if inner.rep_modulus != m * g1 // s or inner.rep_missing != tuple(k * g1 for k in range(m // s)):
        raise RepresentativeViolation(
            f"inner must cover Z_{m * g1 // s} minus the multiples of {g1}")
    inner_t = truncate(inner, outer.M)
    members = tuple(
        outer.members[j] + tuple(tuple(g2 * x for x in b) for b in inner_t.members[j])
        for j in range(outer.M))
    out = NestedFamily(n_out, members, "CRDP", m, 1, rep_modulus=c_out,
                       rep_missing=tuple(k * g1 * g2 for k in range(m // s)))
    return certify(out, "compose_on_subgroup", {"g1": g1, "g2": g2, "m": m, "s": s},
                   [outer, inner_t])


def expand_by_translates(F: NestedFamily) -> NestedFamily:
    """All s-translates of every block; partition-type of index g/s with d_a = a s."""
    _require_certified(F)
    s = F.rep_modulus
    if F.kind != "CDP" or F.lam != 1:
        raise StructureMismatch("expand_by_translates needs a BNCDP of index 1")
    if s <= 0 or F.rep_missing or F.n % s:
        raise RepresentativeViolation("elements must be a complete system mod s with s | g")
    g = F.n
    k = g // s
    members = tuple(
        tuple(tuple((x + j * s) % g for x in b) for b in mem for j in range(k))
        for mem in F.members)
    out = NestedFamily(g, members, "CDP", 1, k)
    _check_partition(out, "expand_by_translates")
    di = compute_di(out)
    _check_floor(di, s, "expand_by_translates")
    exact = all(d == a * s for a, d in enumerate(di, 1))
    return certify(out, "expand_by_translates",
                   {"s": s, "di": tuple(di), "di_exact": exact}, [F])


def fill_with_bncdp(F: NestedFamily, inner: NestedFamily) -> NestedFamily:
    """Translates of F's blocks by multiples of s m, plus m * inner on the subgroup mZ."""
    _require_certified(F, inner)
    if F.kind != "CRDP" or F.lam != 1:
        raise StructureMismatch("outer family must be a BNCRDP of index 1")
    g = F.forbidden_order
    m = F.n // g
    c = F.rep_modulus
    if c <= 0 or c % m:
        raise RepresentativeViolation(f"rep modulus {c} is not a multiple of m={m}")
    s = c // m
    if g % s:
        raise StructureMismatch(f"s={s} does not divide g={g}")
    if F.rep_missing != tuple(k * m for k in range(s)):
        raise RepresentativeViolation(f"outer must miss exactly 0, m, ..., (s-1)m mod {c}")
    if inner.n != g or inner.kind != "CDP" or inner.lam != g // s:
        raise StructureMismatch(
            f"inner must be a partition-type BNCDP over Z_{g} of index {g // s}")
    if not verify_partition_type(inner, allow_empty=True):
        raise StructureMismatch("inner family is not partition-type")
    _check_floor(compute_di(inner), s, "fill_with_bncdp inner")
    inner_t = truncate(inner, F.M)
    k = g // s
    members = tuple(
        tuple(tuple((x + j * s * m) % F.n for x in b) for b in F.members[i] for j in range(k))
        + tuple(tuple(m * x for x in a) for a in inner_t.members[i])
        for i in range(F.M))
    out = NestedFamily(F.n, members, "CDP", 1, k)
    _check_partition(out, "fill_with_bncdp")
    di = compute_di(out)
    _check_floor(di, s * m, "fill_with_bncdp")
    return certify(out, "fill_with_bncdp", {"s": s, "m": m, "di": tuple(di)}, [F, inner_t])


def _columns(F: NestedFamily) -> list[list[tuple[int, int]]]:
    """For each block position, the (member, element) pairs in concatenated order."""
    cols = []
    for i in range(F.size):
        cols.append([(j, x) for j in range(F.M) for x in F.members[j][i]])
    return cols


def expand_by_cdm(F: NestedFamily, D: CDM) -> NestedFamily:
    """Each column spawns w columns with entries a + g * gamma_{r,k}."""
    _require_certified(F)
    if F.kind != "CDP" or F.lam != 1:
        raise StructureMismatch("expand_by_cdm needs a BNCDP of index 1")
    s, g, w = F.rep_modulus, F.n, D.w
    if s <= 0 or F.rep_missing or g % s:
        raise RepresentativeViolation("elements must be a complete system mod s with s | g")
    if not verify_cdm(D):
        raise StructureMismatch("difference matrix is not homogeneous")
    need = max(F.column_sums(), default=0)
    if D.t < need:
        raise CDMTooSmall(f"CDM has {D.t} rows, column sums need {need}")
    if gcd(w, g // s) != 1:
        raise GcdViolation(f"gcd(w, g/s) = gcd({w}, {g // s}) != 1")
    n = g * w
    members = [[] for _ in range(F.M)]
    for col in _columns(F):
        for k in range(w):
            new = [[] for _ in range(F.M)]
            for r, (j, a) in enumerate(col):
                new[j].append((a + g * D.entries[r][k]) % n)
            for j in range(F.M):
                members[j].append(tuple(new[j]))
    out = NestedFamily(n, tuple(tuple(m) for m in members), "CDP", 1, 1,
                       rep_modulus=s * w, rep_missing=())
    return certify(out, "expand_by_cdm", {"w": w, "t": D.t}, [F])


def _expand_by_log(F: NestedFamily, q: int, op: str) -> NestedFamily:
    _require_certified(F)
    if prime_power(q) is None:
        raise FieldTooSmall(f"q={q} is not a prime power")
    if F.lam != 1:
        raise StructureMismatch(f"{op} needs an index-1 family")
    n, c = F.n, F.rep_modulus
    if c <= 0 or n % c:
        raise RepresentativeViolation("input lacks a representative property")
    if F.kind == "CRDP":
        m = n // F.forbidden_order
        if c % m or F.rep_missing != tuple(k * m for k in range(c // m)):
            raise RepresentativeViolation(
                f"elements with 0, m, ..., must cover the cosets mod {c} (m={m})")
    elif F.rep_missing:
        raise RepresentativeViolation("BNCDP input must be a complete system mod s")
    need = max(F.column_sums(), default=0)
    if q < need:
        raise FieldTooSmall(f"q={q} is smaller than the largest column sum {need}")
    if gcd(q - 1, n // c) != 1:
        raise GcdViolation(f"gcd(q-1, g/s) = gcd({q - 1}, {n // c}) != 1")

    K = field_of_order(q)
    elems = K.elements_power_order()
    n_out = n * (q - 1)
    members = [[] for _ in range(F.M)]
    for col in _columns(F):
        eta = elems[:len(col)]
        for y in elems:
            new = [[] for _ in range(F.M)]
            for r, (j, x) in enumerate(col):
                if eta[r] != y:
                    new[j].append((x + n * K.log(K.sub(y, eta[r]))) % n_out)
            for j in range(F.M):
                members[j].append(tuple(new[j]))
    members = tuple(tuple(mm) for mm in members)
    if F.kind == "CRDP":
        m = n // F.forbidden_order
        out = NestedFamily(n_out, members, "CRDP", F.forbidden_order * (q - 1), 1,
                           rep_modulus=c * (q - 1),
                           rep_missing=tuple(k * m for k in range(c * (q - 1) // m)))
    else:
        out = NestedFamily(n_out, members, "CDP", 1, 1, rep_modulus=c * (q - 1))
    return certify(out, op, {"q": q}, [F])


def expand_by_log_crdp(F: NestedFamily, q: int) -> NestedFamily:
    """x + mg * log(y - eta_i(x)) over Z_{mg(q-1)}, relative to g(q-1)."""
    if F.kind != "CRDP":
        raise StructureMismatch("expand_by_log_crdp needs a BNCRDP")
    return _expand_by_log(F, q, "expand_by_log_crdp")


def expand_by_log_cdp(F: NestedFamily, q: int) -> NestedFamily:
    """x + g * log(y - eta_i(x)) over Z_{g(q-1)}."""
    if F.kind != "CDP":
        raise StructureMismatch("expand_by_log_cdp needs a BNCDP")
    return _expand_by_log(F, q, "expand_by_log_cdp")
