"""End-to-end assemblers for the nine FHS-set families.

Each family chains direct constructions and expansions exactly as in its
existence proof, then reads the final partition-type family as an FHS set
and certifies it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from math import gcd, prod
from typing import Callable

from .cdm import build_homogeneous_cdm
from .direct import (
    construct_cyclotomic_bncrdp,
    construct_iterated_log_bncrdp,
    construct_log_bncdp,
    construct_trace_bncrdp,
    cyclotomic_f,
    extend_with_zero_block,
)
from .errors import (
    ConstructionFailed,
    DegenerateParameters,
    FHSError,
    UnknownFamily,
    ValidationFailed,
)
from .fhs import (
    FHSSet,
    VerificationReport,
    check_strict_optimality,
    fhs_from_bncdp,
    structural_report,
)
from .ntheory import factorize, is_prime, least_prime_factor, prime_power
from .packing import NestedFamily, digest
from .recursive import (
    expand_by_cdm,
    expand_by_log_cdp,
    expand_by_log_crdp,
    expand_by_translates,
    fill_with_bncdp,
    trivial_partition,
    truncate,
)

__all__ = [
    "FAMILIES",
    "FamilyRequest",
    "validate",
    "predicted_parameters",
    "assemble",
    "construct_family",
    "emit_parameter_table",
]

FAMILIES = ("d3", "uv2", "uv5", "p4", "p5", "euv", "d4", "uv4", "uv3")

REQUIRED = {
    "d3": ("q", "m", "d", "w"),
    "uv2": ("p", "m", "w"),
    "uv5": ("v", "e", "w"),
    "p4": ("p", "u"),
    "p5": ("p", "m", "u"),
    "euv": ("v", "p", "m"),
    "d4": ("q", "m", "d", "qprime"),
    "uv4": ("p", "m", "q"),
    "uv3": ("v", "e", "q"),
}


@dataclass
class FamilyRequest:
    family: str
    params: dict
    strict: bool = True


# --- validation -------------------------------------------------------------------

def _lpf_gt(w: int, bound: int) -> bool:
    lp = least_prime_factor(w)
    return lp is None or lp > bound


def _v_primes(v: int) -> list[int]:
    return sorted(factorize(v)) if v > 1 else []


def _check_v_e(v: int, e: int, out: list[str]) -> list[int]:
    """Shared hypotheses on v and its common factor e; returns primes of v."""
    if v < 3 or v % 2 == 0:
        out.append(f"v={v} must be an odd integer > 1")
        return []
    ps = _v_primes(v)
    if e < 2:
        out.append(f"e={e} must be > 1")
    else:
        bad = [p for p in ps if (p - 1) % e]
        if bad:
            out.append(f"e={e} must divide p_i - 1 for every prime of v (fails for {bad})")
    return ps


def _check_us(p: int, us, out: list[str]) -> list[int]:
    if not isinstance(us, (list, tuple)) or not us:
        out.append("u must be a nonempty list of exponents")
        return []
    us = [int(x) for x in us]
    if any(a > b for a, b in zip(us, us[1:])):
        out.append(f"u={us} must be nondecreasing")
    if any(x < 2 for x in us):
        out.append(f"every u_i must be > 1 (got {us})")
    s = len(us)
    if s < 3:
        out.append(f"s={s} but s >= 3 is required")
    if len(us) >= 2 and p ** us[1] < p ** (3 * us[0] + 1) * us[1]:
        out.append(f"p^u2 = {p ** us[1]} < p^(3u1+1) u2 = {p ** (3 * us[0] + 1) * us[1]}")
    if len(us) >= 2 and p ** us[1] < 2 ** s:
        out.append(f"p^u2 = {p ** us[1]} < 2^s = {2 ** s}")
    if p ** (us[0] - 1) < 5:
        out.append(f"p^(u1-1) = {p ** (us[0] - 1)} < 5")
    return us


def validate(req: FamilyRequest) -> list[str]:
    fam = req.family
    if fam not in REQUIRED:
        raise UnknownFamily(f"unknown family {fam!r}; expected one of {', '.join(FAMILIES)}")
    P = req.params
    missing = [k for k in REQUIRED[fam] if P.get(k) is None]
    if missing:
        return [f"missing parameter(s): {', '.join(missing)}"]
    out: list[str] = []
    g = {k: (v if k == "u" else int(v)) for k, v in P.items() if v is not None}

    if fam in ("d3", "d4"):
        q, m, d = g["q"], g["m"], g["d"]
        if prime_power(q) is None:
            out.append(f"q={q} is not a prime power")
        if fam == "d3" and m < 3:
            out.append(f"m={m} but m >= 3 is required")
        if fam == "d4" and m < 4:
            out.append(f"m={m} but m >= 4 is required")
        if d < 1 or (q - 1) % d:
            out.append(f"d={d} does not divide q-1={q - 1}")
        if gcd(m, d) != 1:
            out.append(f"gcd(m, d) = {gcd(m, d)} != 1")
        if fam == "d3":
            w = g["w"]
            if w < 1 or w % 2 == 0:
                out.append(f"w={w} must be odd")
            elif not _lpf_gt(w, q):
                out.append(f"least prime factor {least_prime_factor(w)} of w is not > q={q}")
        else:
            qp = g["qprime"]
            if prime_power(qp) is None:
                out.append(f"q'={qp} is not a prime power")
            if qp <= q + 1:
                out.append(f"q'={qp} must exceed q+1={q + 1}")
            if d >= 1 and (q - 1) % d == 0 and gcd(qp - 1, (q - 1) // d) != 1:
                out.append(f"gcd(q'-1, (q-1)/d) = {gcd(qp - 1, (q - 1) // d)} != 1")
            if d < 2:
                out.append(f"d={d} but d >= 2 is required")

    elif fam in ("uv2", "uv4"):
        p, m = g["p"], g["m"]
        if not is_prime(p):
            out.append(f"p={p} is not prime")
        if m < 2:
            out.append(f"m={m} but m > 1 is required")
        if fam == "uv2":
            w = g["w"]
            if w < 1 or w % 2 == 0:
                out.append(f"w={w} must be odd")
            elif not _lpf_gt(w, p ** m):
                out.append(f"least prime factor {least_prime_factor(w)} of w is not > p^m={p ** m}")
        else:
            q = g["q"]
            if prime_power(q) is None:
                out.append(f"q={q} is not a prime power")
            if q < p ** m:
                out.append(f"q={q} < p^m={p ** m}")
            if gcd(q - 1, p) != 1:
                out.append(f"gcd(q-1, p) = {gcd(q - 1, p)} != 1")
            if p ** m - 3 * p < 1:
                out.append(f"p^m - 3p = {p ** m - 3 * p} < 1")

    elif fam in ("uv5", "uv3"):
        v, e = g["v"], g["e"]
        ps = _check_v_e(v, e, out)
        if ps and e >= 2 and not any((p - 1) % e for p in ps):
            f = cyclotomic_f(v, e)
            p1 = ps[0]
            if fam == "uv5":
                w = g["w"]
                if w < 1 or w % 2 == 0:
                    out.append(f"w={w} must be odd")
                elif not _lpf_gt(w, p1 - 1):
                    out.append(f"least prime factor of w is not > p_1-1={p1 - 1}")
                vprime = is_prime(v)
                if not ((not vprime and f > 1) or (vprime and f >= e)):
                    out.append(f"need (v composite and f > 1) or (v prime and f >= e); "
                               f"v {'prime' if vprime else 'composite'}, f={f}, e={e}")
            else:
                q = g["q"]
                if prime_power(q) is None:
                    out.append(f"q={q} is not a prime power")
                if q <= p1 - 1:
                    out.append(f"q={q} must exceed p_1-1={p1 - 1}")
                if gcd(q - 1, e) != 1:
                    out.append(f"gcd(q-1, e) = {gcd(q - 1, e)} != 1")
                if v < e ** 3 * f ** 2:
                    out.append(f"v={v} < e^3 f^2 = {e ** 3 * f ** 2}")
                if q < 2 * e + 5:
                    out.append(f"q={q} < 2e+5 = {2 * e + 5}")
                if f <= 1:
                    out.append(f"f={f} but f > 1 is required")

    elif fam in ("p4", "p5"):
        p = g["p"]
        if not is_prime(p):
            out.append(f"p={p} is not prime")
            return out
        us = _check_us(p, g["u"], out)
        if fam == "p5" and us:
            m = g["m"]
            if p == 2:
                out.append("p must be an odd prime")
            if m < 1:
                out.append(f"m={m} must be positive")
            else:
                big = 2 ** (p ** m)
                if big <= p ** (3 * us[0]) - p ** (2 * us[0]):
                    out.append(f"2^(p^m) = {big} <= p^(3u1) - p^(2u1)")
                if p ** m <= 20:
                    f = cyclotomic_f(big - 1, p) if all((r - 1) % p == 0 for r in _v_primes(big - 1)) else 0
                    if f < p ** (us[0] - 1):
                        out.append(f"cyclotomic family on 2^(p^m)-1 has f={f} < p^(u1-1)={p ** (us[0] - 1)} members")

    elif fam == "euv":
        v, p, m = g["v"], g["p"], g["m"]
        if not is_prime(p):
            out.append(f"p={p} is not prime")
        ps = _check_v_e(v, p, out)
        if m < 2:
            out.append(f"m={m} but m > 1 is required")
        if ps:
            p1 = ps[0]
            if (p1 - 1) // max(p, 1) < 2:
                out.append(f"f = (p_1-1)/p = {(p1 - 1) // max(p, 1)} < 2")
            if p ** m <= p1 - 1:
                out.append(f"p^m = {p ** m} must exceed p_1-1 = {p1 - 1}")
            if p ** m - 2 * (1 + p) <= 0:
                out.append(f"p^m - 2(1+p) = {p ** m - 2 * (1 + p)} <= 0")
    return out


# --- closed forms -------------------------------------------------------------------

def _tail_sum(p: int, us) -> int:
    """sum_i p^{u_i} p^{u_{i+1}} ... p^{u_s}"""
    return sum(prod(p ** x for x in us[i:]) for i in range(len(us)))


def predicted_parameters(family: str, P: dict) -> tuple[int, int, int, int]:
    """(n, M, lambda, l) as given by the family's closed forms."""
    g = P
    if family == "d3":
        q, m, d, w = g["q"], g["m"], g["d"], g["w"]
        return w * (q ** m - 1) // d, d, (q - 1) // d, (q ** (m - 1) - 1 + (q - 1) // d) * w
    if family == "uv2":
        p, m, w = g["p"], g["m"], g["w"]
        return w * p * (p ** m - 1), p ** (m - 1), p, p ** m * w
    if family == "uv5":
        v, e, w = g["v"], g["e"], g["w"]
        return e * w * v, cyclotomic_f(v, e), e, (v - 1 + e) * w
    if family == "p4":
        p, us = g["p"], list(g["u"])
        return (p * prod(p ** x - 1 for x in us), p ** (us[0] - 1), p, 1 + _tail_sum(p, us))
    if family == "p5":
        p, m, us = g["p"], g["m"], list(g["u"])
        big = 2 ** (p ** m)
        return (p * (big - 1) * prod(p ** x - 1 for x in us), p ** (us[0] - 1), p,
                big * (1 + _tail_sum(p, us)) - 1)
    if family == "euv":
        v, p, m = g["v"], g["p"], g["m"]
        return p * v * (p ** m - 1), (_v_primes(v)[0] - 1) // p, p, v * p ** m
    if family == "d4":
        q, m, d, qp = g["q"], g["m"], g["d"], g["qprime"]
        return ((qp - 1) * (q ** m - 1) // d, d, (q - 1) // d,
                (q ** (m - 1) - 1 + (q - 1) // d) * qp)
    if family == "uv4":
        p, m, q = g["p"], g["m"], g["q"]
        return (q - 1) * p * (p ** m - 1), p ** (m - 1), p, p ** m * q
    if family == "uv3":
        v, e, q = g["v"], g["e"], g["q"]
        return e * v * (q - 1), cyclotomic_f(v, e), e, (v - 1 + e) * q
    raise UnknownFamily(f"unknown family {family!r}")


# --- assembly --------------------------------------------------------------------

@dataclass
class _Trace:
    lines: list[str] = field(default_factory=list)

    def run(self, name: str, fn: Callable, *args):
        try:
            out = fn(*args)
        except ValidationFailed:
            raise
        except FHSError as exc:
            raise type(exc)(f"stage {name}: {exc}") from exc
        fam = out[0] if isinstance(out, tuple) else out
        if isinstance(fam, NestedFamily):
            self.lines.append(
                f"stage={name} n={fam.n} M={fam.M} size={fam.size} kind={fam.kind} "
                f"g={fam.forbidden_order} lambda={fam.lam} digest={digest(fam)}")
            if fam.certificates:
                self.lines.append(f"  cert {fam.certificates[-1].line()}")
        return out

    def note(self, text: str) -> None:
        self.lines.append(f"note {text}")


def _cdm_stage(F: NestedFamily, w: int, t: int) -> NestedFamily:
    return expand_by_cdm(F, build_homogeneous_cdm(w, t))


def _cyclo_fill_inner(v: int, p: int) -> NestedFamily:
    """Partition-type (pv, p)-BNCDP of size v with d_i >= v i."""
    cyc = construct_cyclotomic_bncrdp(v, p, p)
    return fill_with_bncdp(cyc, trivial_partition(p, cyc.M))


def _chain(fam: str, P: dict, T: _Trace, strict: bool) -> NestedFamily:
    if fam == "d3":
        q, m, d, w = P["q"], P["m"], P["d"], P["w"]
        B, _ = T.run("trace_bncrdp", construct_trace_bncrdp, q, m, d)
        B = T.run("extend_with_zero_block", extend_with_zero_block, B)
        B = T.run("expand_by_cdm", _cdm_stage, B, w, q)
        return T.run("expand_by_translates", expand_by_translates, B)
    if fam == "uv2":
        p, m, w = P["p"], P["m"], P["w"]
        B = T.run("log_bncdp", construct_log_bncdp, p, m)
        B = T.run("expand_by_cdm", _cdm_stage, B, w, p ** m)
        return T.run("expand_by_translates", expand_by_translates, B)
    if fam == "uv5":
        v, e, w = P["v"], P["e"], P["w"]
        B = T.run("cyclotomic_bncrdp", construct_cyclotomic_bncrdp, v, e, e)
        B = T.run("extend_with_zero_block", extend_with_zero_block, B)
        B = T.run("expand_by_cdm", _cdm_stage, B, w, max(B.column_sums()))
        return T.run("expand_by_translates", expand_by_translates, B)
    if fam == "uv3":
        v, e, q = P["v"], P["e"], P["q"]
        B = T.run("cyclotomic_bncrdp", construct_cyclotomic_bncrdp, v, e, e)
        B = T.run("extend_with_zero_block", extend_with_zero_block, B)
        B = T.run("expand_by_log_cdp", expand_by_log_cdp, B, q)
        return T.run("expand_by_translates", expand_by_translates, B)
    if fam == "d4":
        q, m, d, qp = P["q"], P["m"], P["d"], P["qprime"]
        B, _ = T.run("trace_bncrdp", construct_trace_bncrdp, q, m, d)
        B = T.run("extend_with_zero_block", extend_with_zero_block, B)
        B = T.run("expand_by_log_cdp", expand_by_log_cdp, B, qp)
        return T.run("expand_by_translates", expand_by_translates, B)
    if fam == "uv4":
        p, m, q = P["p"], P["m"], P["q"]
        B = T.run("log_bncdp", construct_log_bncdp, p, m)
        B = T.run("expand_by_log_cdp", expand_by_log_cdp, B, q)
        return T.run("expand_by_translates", expand_by_translates, B)
    if fam == "euv":
        v, p, m = P["v"], P["p"], P["m"]
        B = T.run("cyclotomic_bncrdp", construct_cyclotomic_bncrdp, v, p, p)
        B = T.run("expand_by_log_crdp", expand_by_log_crdp, B, p ** m)
        A = T.run("log_bncdp", construct_log_bncdp, p, m)
        A = T.run("expand_by_translates", expand_by_translates, A)
        return T.run("fill_with_bncdp", fill_with_bncdp, B, A)
    if fam == "p4":
        p, us = P["p"], list(P["u"])
        B = T.run("iterated_log_bncrdp", construct_iterated_log_bncrdp, p, us)
        A = T.run("trivial_partition", trivial_partition, p, B.M)
        return T.run("fill_with_bncdp", fill_with_bncdp, B, A)
    if fam == "p5":
        p, m, us = P["p"], P["m"], list(P["u"])
        big = 2 ** (p ** m)
        B = T.run("iterated_log_bncrdp", construct_iterated_log_bncrdp, p, us)
        B = T.run("expand_by_log_crdp", expand_by_log_crdp, B, big)
        A = T.run("cyclotomic_fill", _cyclo_fill_inner, big - 1, p)
        if A.M < B.M:
            if strict:
                raise ConstructionFailed(
                    f"inner family has {A.M} members but {B.M} are needed")
            T.note(f"inner family has only {A.M} members; keeping {A.M} of {B.M} outer members")
            B = T.run("truncate", truncate, B, A.M)
        return T.run("fill_with_bncdp", fill_with_bncdp, B, A)
    raise UnknownFamily(f"unknown family {fam!r}")


def _normalize(fam: str, P: dict) -> dict:
    out = {}
    for k, v in P.items():
        if v is None:
            continue
        out[k] = [int(x) for x in v] if k == "u" else int(v)
    return out


def construct_family(req: FamilyRequest) -> tuple[NestedFamily, list[str]]:
    """Run the family's chain; returns the certified partition-type family and the trace."""
    violations = validate(req)
    T = _Trace()
    if violations and (req.strict or any(v.startswith("missing") for v in violations)):
        raise ValidationFailed(violations)
    for v in violations:
        T.note(f"permissive: {v}")
    P = _normalize(req.family, req.params)
    return _chain(req.family, P, T, req.strict), T.lines


def assemble(req: FamilyRequest, scan: bool | None = None
             ) -> tuple[FHSSet, VerificationReport, list[str]]:
    D, lines = construct_family(req)
    T = _Trace(lines)
    P = _normalize(req.family, req.params)
    S = fhs_from_bncdp(D, l=D.size)
    n, M, lam, l = predicted_parameters(req.family, P)
    measured = (S.n, S.M, S.lam, S.l)
    T.lines.append(f"predicted n={n} M={M} lambda={lam} l={l}")
    T.lines.append(f"measured n={S.n} M={S.M} lambda={S.lam} l={S.l}")
    if measured != (n, M, lam, l):
        if req.strict:
            raise ConstructionFailed(f"measured {measured} differs from predicted {(n, M, lam, l)}")
        T.note("measured parameters differ from the closed forms")
    try:
        report = check_strict_optimality(S, scan=scan)
    except DegenerateParameters as exc:
        if req.strict:
            raise
        report = structural_report(S, f"bound undefined ({exc}); structural checks only")
        T.note(report.notes[0])
    T.lines.append(f"verdict strict={'yes' if report.strictly_optimal else 'no'} "
                   f"direct={report.direct_verdict} characterization={report.char_verdict}")
    return S, report, T.lines


# --- catalog ------------------------------------------------------------------------

def _prime_powers(lo: int, hi: int):
    return [q for q in range(lo, hi + 1) if prime_power(q)]


def _candidates(family: str, max_n: int):
    odd = range(1, max_n + 1, 2)
    if family in ("d3", "d4"):
        for q in _prime_powers(2, max_n + 1):
            for m in range(3 if family == "d3" else 4, 64):
                if q ** m - 1 > max_n * (q - 1):
                    break
                for d in range(1, q):
                    if (q - 1) % d:
                        continue
                    if family == "d3":
                        for w in odd:
                            yield {"q": q, "m": m, "d": d, "w": w}
                    else:
                        for qp in _prime_powers(q + 2, max_n + 1):
                            yield {"q": q, "m": m, "d": d, "qprime": qp}
    elif family in ("uv2", "uv4"):
        for p in range(2, max_n + 1):
            if not is_prime(p):
                continue
            for m in range(2, 64):
                if p * (p ** m - 1) > max_n:
                    break
                if family == "uv2":
                    for w in odd:
                        yield {"p": p, "m": m, "w": w}
                else:
                    for q in _prime_powers(p ** m, max_n + 1):
                        yield {"p": p, "m": m, "q": q}
    elif family in ("uv5", "uv3"):
        for v in range(3, max_n + 1, 2):
            for e in range(2, v):
                if e * v > max_n:
                    break
                if family == "uv5":
                    for w in odd:
                        yield {"v": v, "e": e, "w": w}
                else:
                    for q in _prime_powers(2, max_n + 1):
                        yield {"v": v, "e": e, "q": q}
    elif family == "euv":
        for v in range(3, max_n + 1, 2):
            for p in range(2, v):
                if not is_prime(p) or p * v > max_n:
                    continue
                for m in range(2, 64):
                    if p * v * (p ** m - 1) > max_n:
                        break
                    yield {"v": v, "p": p, "m": m}
    elif family in ("p4", "p5"):
        for p in range(2, max_n + 1):
            if not is_prime(p) or p * (p - 1) ** 3 > max_n:
                break
            for u1 in count(2):
                if p * (p ** u1 - 1) ** 3 > max_n:
                    break
                for u2 in count(u1):
                    if p * (p ** u1 - 1) * (p ** u2 - 1) ** 2 > max_n:
                        break
                    for u3 in count(u2):
                        if p * (p ** u1 - 1) * (p ** u2 - 1) * (p ** u3 - 1) > max_n:
                            break
                        if family == "p4":
                            yield {"p": p, "u": [u1, u2, u3]}
                        else:
                            for m in range(1, 4):
                                yield {"p": p, "m": m, "u": [u1, u2, u3]}


def emit_parameter_table(family: str, max_n: int) -> list[tuple[dict, tuple[int, int, int, int]]]:
    """Parameter sets passing validation with predicted n <= max_n."""
    if family not in REQUIRED:
        raise UnknownFamily(f"unknown family {family!r}")
    out = []
    for P in _candidates(family, max_n):
        if validate(FamilyRequest(family, P)):
            continue
        pred = predicted_parameters(family, P)
        if pred[0] <= max_n:
            out.append((P, pred))
    return out
