"""Command-line front end.

Exit codes: 0 success (verify: strictly optimal), 1 verify found a gap,
2 usage error, 3 validation or format error, 4 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import FHSError, InternalError, InvalidInput, ValidationFailed
from .fhs import (
    bound_partial,
    check_strict_optimality,
    fhs_from_text,
    fhs_to_text,
    peng_fan_lambda,
    report_lines,
)
from .packing import compute_di, from_text, verify_nested, verify_partition_type
from .pipeline import FAMILIES, REQUIRED, FamilyRequest, assemble, emit_parameter_table

EXIT_OK, EXIT_GAP, EXIT_USAGE, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3, 4

PARAMS = ("q", "m", "d", "w", "p", "v", "e", "qprime")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="strictfhs", description="FHS sets with strictly optimal partial Hamming correlation")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="assemble a family and write FHS, report and trace files")
    g.add_argument("--family", required=True, choices=FAMILIES)
    for k in PARAMS:
        g.add_argument(f"--{k}", type=int)
    g.add_argument("--u", type=int, nargs="+", help="exponent list u_1 <= ... <= u_s")
    g.add_argument("--permissive", action="store_true", help="downgrade constraint violations to warnings")
    g.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="check strict optimality of an FHS file")
    v.add_argument("--in", dest="inp", required=True)
    v.add_argument("--per-window", action="store_true")

    b = sub.add_parser("bound", help="print the partial-correlation lower bound")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--M", type=int, required=True)
    b.add_argument("--l", type=int, required=True)
    b.add_argument("--L", type=int)

    c = sub.add_parser("catalog", help="list feasible small instances of a family")
    c.add_argument("--family", required=True, choices=FAMILIES)
    c.add_argument("--max-n", type=int, required=True)

    i = sub.add_parser("inspect", help="structural summary of a PACKING or FHS file")
    i.add_argument("--in", dest="inp", required=True)
    return ap


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


class _Usage(Exception):
    pass


def _generate(a) -> int:
    params = {k: getattr(a, k) for k in PARAMS if getattr(a, k) is not None}
    if a.u is not None:
        params["u"] = list(a.u)
    missing = [k for k in REQUIRED[a.family] if k not in params]
    if missing:
        raise _Usage(f"family {a.family} needs " + " ".join(f"--{k}" for k in missing))
    S, R, trace = assemble(FamilyRequest(a.family, params, strict=not a.permissive))
    out = Path(a.out)
    out.write_text(fhs_to_text(S))
    Path(f"{out}.report").write_text("\n".join(report_lines(R, per_window=True)) + "\n")
    Path(f"{out}.trace").write_text("\n".join(trace) + "\n")
    print(f"wrote {out} n={S.n} M={S.M} l={S.l} lambda={S.lam}")
    for note in R.notes:
        print(f"note: {note}")
    print(f"STRICT={'yes' if R.strictly_optimal else 'no'}")
    return EXIT_OK


def _verify(a) -> int:
    S = fhs_from_text(_read(a.inp))
    R = check_strict_optimality(S)
    for line in report_lines(R, per_window=a.per_window):
        print(line)
    return EXIT_OK if R.strictly_optimal else EXIT_GAP


def _bound(a) -> int:
    if a.L is not None:
        print(bound_partial(a.n, a.M, a.l, a.L))
    else:
        lam = peng_fan_lambda(a.n, a.M, a.l)
        print(f"lambda={lam}")
        for L in range(1, a.n + 1):
            print(f"L={L} bound={bound_partial(a.n, a.M, a.l, L)}")
    return EXIT_OK


def _catalog(a) -> int:
    for P, (n, M, lam, l) in emit_parameter_table(a.family, a.max_n):
        args = " ".join(f"{k}={','.join(map(str, v)) if k == 'u' else v}" for k, v in P.items())
        print(f"{a.family} {args} -> n={n} M={M} lambda={lam} l={l}")
    return EXIT_OK


def _inspect(a) -> int:
    text = _read(a.inp)
    head = text.lstrip().split(None, 1)[0] if text.strip() else ""
    if head == "FHS":
        S = fhs_from_text(text)
        used = sorted({x for s in S.sequences for x in s})
        print(f"FHS n={S.n} M={S.M} l={S.l} lambda={S.lam} symbols_used={len(used)}")
        return EXIT_OK
    F = from_text(text)
    res = verify_nested(F)
    part = verify_partition_type(F, allow_empty=True)
    print(f"PACKING n={F.n} kind={F.kind} g={F.forbidden_order} lambda={F.lam} "
          f"members={F.M} blocks={F.size}")
    print(f"nested={'ok' if res.ok else 'violated'} partition_type={'yes' if part else 'no'}")
    for v in res.violations[:10]:
        print(f"violation: {v}")
    if part and F.kind == "CDP":
        print("di=" + " ".join(map(str, compute_di(F))))
    return EXIT_OK


VERBS = {"generate": _generate, "verify": _verify, "bound": _bound,
         "catalog": _catalog, "inspect": _inspect}


def main(argv: list[str] | None = None) -> int:
    try:
        a = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return VERBS[a.verb](a)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationFailed as exc:
        print("validation failed:", file=sys.stderr)
        for v in exc.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_INVALID
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (InternalError, FHSError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
