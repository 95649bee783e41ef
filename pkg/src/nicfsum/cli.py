"""Command-line front end.

    nicfsum expand --kind nicf "(5+1*sqrt(21))/2"
    nicfsum eval "[0;per(2,4)]"
    nicfsum decompose 314159/100000 --json
    nicfsum verify all --depth 8
    nicfsum tree dump --depth 3

Exit status is 0 on success, 1 when a verification fails and 2 on usage
errors.  ``NICFSUM_PRECISION`` sets the default number of decimals.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
import time
from fractions import Fraction
from typing import Callable, Optional, Sequence, TextIO

from . import __version__
from .contfrac import DepthExceeded, cf_eval, format_cf, nicf_expand, parse_cf, rcf_expand
from .exact import ExactError, format_number, parse_number, to_decimal

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
VERIFY_SUITES = ("table1", "table2", "cover", "gap", "omega", "oracle", "decompose")

CSV_HELP = """\
CSV columns:
  table1     kind, nodes, bound, min_ratio, witness_path, pass
  table2     coeffs, min_exact, max_exact, cover_lo, cover_hi
  gap        first, second, sum_lo, sum_hi, dist_I1, dist_I2
"""


class UsageError(Exception):
    pass


def _default_precision() -> int:
    raw = os.environ.get("NICFSUM_PRECISION", "15")
    try:
        p = int(raw)
    except ValueError:
        raise UsageError(f"NICFSUM_PRECISION must be an integer, got {raw!r}") from None
    return p


class Out:
    """Serialises records to one stream (stdout or ``--out``)."""

    def __init__(self, stream: TextIO, precision: int, fmt: str):
        self.stream = stream
        self.precision = precision
        self.fmt = fmt

    def dual(self, x) -> str:
        return f"{format_number(x)} ≈ {to_decimal(x, self.precision)}"

    def num(self, x) -> dict:
        return {"exact": format_number(x), "decimal": to_decimal(x, self.precision)}

    def line(self, text: str = "") -> None:
        print(text, file=self.stream, flush=True)

    def record(self, obj: dict) -> None:
        self.line(json.dumps(obj))


def _number(text: str):
    try:
        return parse_number(text)
    except (ValueError, ExactError) as exc:
        raise UsageError(str(exc)) from None


# -- subcommands ----------------------------------------------------------------


def cmd_expand(args, out: Out) -> int:
    x = _number(args.number)
    fn = nicf_expand if args.kind == "nicf" else rcf_expand
    try:
        e = fn(x, max_depth=args.max_depth)
    except DepthExceeded as exc:
        raise UsageError(str(exc)) from None
    if out.fmt == "json":
        out.record({"input": out.num(x), "kind": args.kind, "expansion": format_cf(e)})
    else:
        out.line(format_cf(e))
    return EXIT_OK


def cmd_eval(args, out: Out) -> int:
    try:
        e = parse_cf(args.literal)
        x = cf_eval(e)
    except (ValueError, ExactError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    if out.fmt == "json":
        out.record({"expansion": format_cf(e), "value": out.num(x)})
    else:
        out.line(out.dual(x))
    return EXIT_OK


def cmd_decompose(args, out: Out) -> int:
    from .decompose import MaxStepsExceeded, certify, decompose_real

    x = _number(args.x)
    tol = _number(args.tol)
    if not tol > 0:
        raise UsageError("--tol must be positive")
    status = EXIT_OK
    try:
        d = decompose_real(x, tol, args.max_steps)
    except MaxStepsExceeded as exc:
        d = exc.partial
        status = EXIT_FAIL
        print(f"warning: {exc}", file=sys.stderr)
    if args.json or out.fmt == "json":
        obj = d.to_dict()
        for side in ("u", "v"):
            enc = obj[side]["enclosure"]
            iv = d.u_enclosure if side == "u" else d.v_enclosure
            enc["lo"], enc["hi"] = out.num(iv.lo), out.num(iv.hi)
        obj["residual_bound"] = out.num(d.residual_bound)
        obj["x"] = out.num(x)
        out.record(obj)
    else:
        out.line(f"x          = {out.dual(x)}")
        out.line(f"shift      = {d.shift}")
        out.line(f"u digits   = {format_cf(d.u_digits) if d.u_digits else '[]'}")
        out.line(f"u in       [{out.dual(d.u_enclosure.lo)}, {out.dual(d.u_enclosure.hi)}]")
        out.line(f"v digits   = {format_cf(d.v_digits) if d.v_digits else '[]'}")
        out.line(f"v in       [{out.dual(d.v_enclosure.lo)}, {out.dual(d.v_enclosure.hi)}]")
        out.line(f"residual   = {to_decimal(d.residual_bound, 20)} after {d.steps} steps")
    if status == EXIT_OK and args.certify:
        certify(d, x)
    return status


def cmd_tree(args, out: Out) -> int:
    from .nicf5 import c_nicf

    tree = c_nicf()
    if out.fmt == "csv":
        w = csv.writer(out.stream)
        w.writerow(["path", "node", "lo", "hi", "gap_lo", "gap_hi"])
    for node in tree.walk(args.depth + 1):
        t = node.payload
        iv = node.interval
        gap = tree.split(node).gap if node.depth < args.depth else None
        if out.fmt == "json":
            rec = {"path": node.path, "node": t.label, "lo": out.num(iv.lo), "hi": out.num(iv.hi)}
            if gap:
                rec["gap"] = {"lo": out.num(gap.lo), "hi": out.num(gap.hi)}
            out.record(rec)
        elif out.fmt == "csv":
            g = [to_decimal(gap.lo, out.precision), to_decimal(gap.hi, out.precision)] if gap else ["", ""]
            w.writerow([node.path, t.label, to_decimal(iv.lo, out.precision), to_decimal(iv.hi, out.precision), *g])
        else:
            pad = "  " * node.depth
            out.line(f"{pad}{t.label} {iv.decimal(out.precision)}")
    return EXIT_OK


# -- verification suites --------------------------------------------------------


def _verdict(out: Out, suite: str, ok: bool, detail: str, t0: float) -> bool:
    secs = time.perf_counter() - t0
    if out.fmt == "json":
        out.record({"suite": suite, "pass": ok, "detail": detail, "seconds": round(secs, 3)})
    elif out.fmt == "text":
        out.line(f"{'PASS' if ok else 'FAIL'}  {suite:<10} {detail} ({secs:.2f}s)")
    return ok


def suite_table1(args, out: Out) -> bool:
    from .nicf5 import TABLE1_BOUNDS, kind_label, verify_table1

    t0 = time.perf_counter()
    rep = verify_table1(args.depth)
    if out.fmt == "csv":
        w = csv.writer(out.stream)
        w.writerow(["kind", "nodes", "bound", "min_ratio", "witness_path", "pass"])
    for kind, row in rep.rows.items():
        bound = " / ".join(to_decimal(b, 5) for b in TABLE1_BOUNDS[kind])
        m = to_decimal(row.min_ratio, 5) if row.count else "-"
        if out.fmt == "csv":
            w.writerow([kind_label(kind), row.count, bound, m, row.min_path, row.passed and row.sided_ok])
        elif out.fmt == "text":
            out.line(f"  {kind_label(kind):<11} nodes={row.count:<4} min={m:<8} bound={bound}")
    detail = (
        f"depth={args.depth} nodes={rep.nodes} min ratio={to_decimal(rep.global_min, 5)} "
        f"max |omega|={to_decimal(rep.omega_max, 5)} size formula={'ok' if rep.formula_ok else 'FAILED'}"
    )
    return _verdict(out, "table1", rep.passed, detail, t0)


def suite_omega(args, out: Out) -> bool:
    from .nicf5 import verify_omega

    t0 = time.perf_counter()
    ok, worst, count = verify_omega(args.depth)
    return _verdict(out, "omega", ok, f"{count} prefixes, max |q_(n-1)/q_n| = {to_decimal(worst, 6)} < 0.618034", t0)


def suite_table2(args, out: Out) -> bool:
    from .nicf4 import build_table2

    t0 = time.perf_counter()
    rows = build_table2()
    if out.fmt == "csv":
        w = csv.writer(out.stream)
        w.writerow(["coeffs", "min_exact", "max_exact", "cover_lo", "cover_hi"])
        for r in rows:
            w.writerow(r.csv_row())
    elif out.fmt == "text":
        for r in rows:
            flag = "  (one-ulp slip in print)" if r.typo_candidate else ""
            out.line(f"  {r.label:<16} {r.covering.decimal(5)}{flag}")
    slips = sum(r.typo_candidate for r in rows)
    return _verdict(out, "table2", len(rows) == 40, f"{len(rows)} rows match the printed coverings, {slips} one-ulp slips", t0)


def suite_cover(args, out: Out) -> bool:
    from .nicf4 import verify_union_covers

    t0 = time.perf_counter()
    rep = verify_union_covers(6)
    return _verdict(
        out, "cover", rep.passed, f"{rep.prefixes} digit strings up to length 6, {len(rep.uncovered)} uncovered", t0
    )


def suite_gap(args, out: Out) -> bool:
    from .nicf4 import I1, I2, format_coeffs, verify_gap

    t0 = time.perf_counter()
    rep = verify_gap()
    if out.fmt == "csv":
        w = csv.writer(out.stream)
        w.writerow(["first", "second", "sum_lo", "sum_hi", "dist_I1", "dist_I2"])
        for p in sorted(rep.pairs, key=lambda p: min(p.distance(I1), p.distance(I2))):
            w.writerow(
                [
                    format_coeffs(p.first),
                    format_coeffs(p.second),
                    to_decimal(p.interval.lo, 5),
                    to_decimal(p.interval.hi, 5),
                    to_decimal(p.distance(I1), 6),
                    to_decimal(p.distance(I2), 6),
                ]
            )
    elif out.fmt == "text":
        for x in rep.listed:
            note = "" if x.label_ok else f"  printed label differs; sum matches {', '.join(x.matches) or 'nothing'}"
            out.line(f"  {x.label:<28} {x.computed.decimal(5)} printed {x.printed.decimal(5)}{note}")
    detail = (
        f"{len(rep.pairs)} pairs, {len(rep.hits)} hits, nearest distance I1 {to_decimal(rep.min_distance(I1), 6)}, "
        f"I2 {to_decimal(rep.min_distance(I2), 6)}, {len(rep.undominated)} undominated"
    )
    return _verdict(out, "gap", rep.passed, detail, t0)


def suite_oracle(args, out: Out) -> bool:
    from .nicf5 import cylinder_oracle, tree_cylinders

    t0 = time.perf_counter()
    n = min(args.depth, 5)
    ok = all(cylinder_oracle(k) == tree_cylinders(k) for k in range(n + 1))
    return _verdict(out, "oracle", ok, f"digit cylinders up to {n} digits agree with the tree", t0)


def suite_decompose(args, out: Out) -> bool:
    from .decompose import certify, decompose_real

    t0 = time.perf_counter()
    rng = random.Random(args.seed)
    worst = 0
    for _ in range(args.samples):
        x = Fraction(1, 2) + Fraction(rng.randrange(10**12 + 1), 10**12)
        d = decompose_real(x, Fraction(1, 10**12), 10_000)
        certify(d, x)
        worst = max(worst, d.steps)
    return _verdict(out, "decompose", True, f"{args.samples} samples (seed {args.seed}), at most {worst} steps", t0)


SUITES: dict[str, Callable] = {
    "table1": suite_table1,
    "table2": suite_table2,
    "cover": suite_cover,
    "gap": suite_gap,
    "omega": suite_omega,
    "oracle": suite_oracle,
    "decompose": suite_decompose,
}


def cmd_verify(args, out: Out) -> int:
    names = VERIFY_SUITES if args.suite == "all" else (args.suite,)
    if args.csv:
        out.fmt = "csv"
    results = [SUITES[n](args, out) for n in names]
    if args.suite == "all" and out.fmt == "text":
        out.line(f"{sum(results)}/{len(results)} suites passed")
    return EXIT_OK if all(results) else EXIT_FAIL


# -- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="decimal digits (default 15 or $NICFSUM_PRECISION)")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", help="write output to this file instead of stdout")

    p = argparse.ArgumentParser(
        prog="nicfsum",
        description="Nearest-integer continued fractions with bounded digits.",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("expand", parents=[common], help="expand an exact number")
    e.add_argument("number")
    e.add_argument("--kind", choices=("nicf", "rcf"), default="nicf")
    e.add_argument("--max-depth", type=int, default=10_000)
    e.set_defaults(func=cmd_expand)

    v = sub.add_parser("eval", parents=[common], help="evaluate a continued fraction literal")
    v.add_argument("literal")
    v.set_defaults(func=cmd_eval)

    d = sub.add_parser("decompose", parents=[common], help="write x = u + v with digits bounded by 5")
    d.add_argument("x")
    d.add_argument("--tol", default="1/1000000000000")
    d.add_argument("--max-steps", type=int, default=10_000)
    d.add_argument("--json", action="store_true")
    d.add_argument("--certify", action="store_true", help="re-check the result independently")
    d.set_defaults(func=cmd_decompose)

    r = sub.add_parser(
        "verify",
        parents=[common],
        help="run verification sweeps",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    r.add_argument("suite", choices=VERIFY_SUITES + ("all",))
    r.add_argument("--depth", type=int, default=8)
    r.add_argument("--csv", action="store_true", help="dump rows as CSV")
    r.add_argument("--seed", type=int, default=2024)
    r.add_argument("--samples", type=int, default=50)
    r.set_defaults(func=cmd_verify)

    t = sub.add_parser("tree", parents=[common], help="inspect the Cantor tree")
    t.add_argument("action", choices=("dump",))
    t.add_argument("--depth", type=int, default=3)
    t.set_defaults(func=cmd_tree)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    stream = None
    try:
        precision = args.precision if args.precision is not None else _default_precision()
        if not 1 <= precision <= 1000:
            raise UsageError("precision must be in [1, 1000]")
        if getattr(args, "depth", 1) < 1:
            raise UsageError("--depth must be >= 1")
        stream = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
        return args.func(args, Out(stream, precision, args.format))
    except UsageError as exc:
        print(f"nicfsum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"nicfsum: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except BrokenPipeError:
        # reader went away (e.g. piped into head)
        sys.stderr.close()
        return EXIT_OK
    finally:
        if stream is not None and stream is not sys.stdout:
            stream.close()


if __name__ == "__main__":
    sys.exit(main())
