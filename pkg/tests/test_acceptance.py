"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (collected again in the
terminal summary) and then asserts.  Run alone with

    pytest tests/test_acceptance.py -v
"""

import random
import time
from fractions import Fraction as F

from nicfsum.cantor import (
    CantorTree,
    Interval,
    gaps_to_depth,
    hole_decreasing_wrap,
    interval_sum,
    is_hole_decreasing,
)
from nicfsum.cli import main as cli_main
from nicfsum.contfrac import cf_eval, convergents, nicf_expand, rcf_expand, validate_nicf
from nicfsum.decompose import CORE_RANGE, certify, decompose_real, sum_coverage
from nicfsum.exact import sqrt, to_decimal
from nicfsum.nicf4 import I1, I2, PRINTED_TABLE2, build_table2, nicf4_extremes, verify_gap, verify_union_covers
from nicfsum.nicf5 import INV_MU, ROOT_INTERVAL, c_nicf, cylinder_oracle, expand_node, root_node, tree_cylinders, verify_table1

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

ULP = F(1, 10**5)


def report(n: int, title: str, ok: bool, detail: str, started: float, budget: float) -> None:
    secs = time.perf_counter() - started
    ok = ok and secs < budget
    line = f"{'PASS' if ok else 'FAIL'}  criterion {n:>2}  {title}: {detail} [{secs:.2f}s / {budget:.0f}s]"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_01_constants():
    t0 = time.perf_counter()
    lo, hi = ROOT_INTERVAL.lo, ROOT_INTERVAL.hi
    ok = (
        to_decimal(lo, 6) == "0.208712"
        and str(to_decimal(hi, 7)).startswith("0.791287")
        and lo == INV_MU
        and hi - lo == sqrt(21) - 4
        and sqrt(21) - 4 > F("0.58256")
    )
    report(1, "constants", ok, f"1/mu={to_decimal(lo, 7)} 1-1/mu={to_decimal(hi, 7)} length={to_decimal(hi - lo, 7)}", t0, 1)


def test_02_root_gap():
    t0 = time.perf_counter()
    gap, left, right = expand_node(root_node())
    ratio = min(left.interval.length, right.interval.length) / gap.length
    ok = (
        gap.length < F("0.09451")
        and left.interval.length > F("0.24403")
        and right.interval.length > F("0.24403")
        and ratio > F("2.58205")
    )
    report(2, "root gap", ok, f"gap={to_decimal(gap.length, 6)} ratio={to_decimal(ratio, 6)}", t0, 1)


def test_03_table1_sweep():
    t0 = time.perf_counter()
    code = cli_main(["verify", "table1", "--depth", "8"])
    rep = verify_table1(8)
    ok = code == 0 and rep.passed and rep.omega_ok and rep.formula_ok and rep.global_min > F("1.06122")
    detail = f"{rep.nodes} nodes, min ratio {to_decimal(rep.global_min, 5)}, max |omega| {to_decimal(rep.omega_max, 5)}"
    report(3, "table 1 sweep", ok, detail, t0, 30)


def test_04_decomposition():
    t0 = time.perf_counter()
    rng = random.Random(20240101)
    tol = F(1, 10**12)
    allowed = {-5, -4, -3, -2, 2, 3, 4, 5}
    ok, worst, bad = True, 0, None
    for _ in range(1000):
        x = F(1, 2) + F(rng.randrange(10**12 + 1), 10**12)
        d = decompose_real(x, tol, 10_000)
        certify(d, x)
        worst = max(worst, d.steps)
        for digits in (d.u_prefix, d.v_prefix):
            if not (set(digits[1:]) <= allowed and validate_nicf(digits, bound=5, star=True)):
                ok, bad = False, digits
        if d.residual_bound > tol:
            ok, bad = False, x
    report(4, "decomposition", ok, f"1000 rationals, at most {worst} steps, offender {bad}", t0, 60)


def test_05_sum_coverage():
    t0 = time.perf_counter()
    merged, ok = sum_coverage(6)
    report(5, "sum coverage", ok and merged == [CORE_RANGE], f"{len(merged)} merged interval(s) at depth 6", t0, 30)


def test_06_nicf4_extremes():
    t0 = time.perf_counter()
    lo, hi = nicf4_extremes()
    ok = (
        hi == sqrt(6) - 2
        and lo == (sqrt(6) - 2) / 2
        and to_decimal(hi, 5) == PRINTED_TABLE2[(2,)][3]
        and F(to_decimal(lo, 5)) - ULP <= F(PRINTED_TABLE2[(4,)][2]) <= F(to_decimal(lo, 5))
    )
    report(6, "NICF4 extremes", ok, f"max={to_decimal(hi, 7)} min={to_decimal(lo, 7)}", t0, 1)


def test_07_table2():
    t0 = time.perf_counter()
    rows = build_table2()
    worst = max(
        max(abs(r.covering.lo - F(PRINTED_TABLE2[r.coeffs][2])), abs(r.covering.hi - F(PRINTED_TABLE2[r.coeffs][3])))
        for r in rows
    )
    cover = verify_union_covers(6)
    ok = len(rows) == 40 and worst <= ULP and cover.passed
    detail = f"40 rows, max deviation {float(worst):.1e}, {len(cover.uncovered)} uncovered of {cover.prefixes} strings"
    report(7, "table 2", ok, detail, t0, 30)


def test_08_gap():
    t0 = time.perf_counter()
    rep = verify_gap()
    ok = len(rep.pairs) == 820 and not rep.hits and all(x.reproduced for x in rep.listed)
    slips = [x.label for x in rep.listed if not x.label_ok]
    detail = (
        f"820 pairs miss I1 by >= {to_decimal(rep.min_distance(I1), 6)} and I2 by >= {to_decimal(rep.min_distance(I2), 6)}; "
        f"{len(rep.listed)} printed sums reproduced, mislabelled rows {slips}"
    )
    report(8, "bound 4 gap", ok, detail, t0, 10)


def test_09_oracle():
    t0 = time.perf_counter()
    counts = []
    ok = True
    for n in range(7):
        a, b = cylinder_oracle(n), tree_cylinders(n)
        ok = ok and a == b
        counts.append(len(a))
    report(9, "oracle equivalence", ok, f"cylinder counts {counts}", t0, 60)


def _toy_trees():
    def thirds(iv, _):
        t = iv.length / 3
        return Interval(iv.lo + t, iv.hi - t), None, None

    def alternating(iv, depth):
        share = F(1, 10) if depth % 2 == 0 else F(1, 2)
        s = iv.lo + iv.length / 3
        return Interval(s, s + iv.length * share), depth + 1, depth + 1

    return [CantorTree(Interval(F(0), F(1)), thirds), CantorTree(Interval(F(0), F(1)), alternating, 0)]


def _wrap_preserves(tree, depth) -> bool:
    w = hole_decreasing_wrap(tree)
    original = {(g.lo, g.hi) for g in gaps_to_depth(tree, 2 * depth)}
    wrapped = {(g.lo, g.hi) for g in gaps_to_depth(w, depth)}
    shallow = {(g.lo, g.hi) for g in gaps_to_depth(tree, depth // 2)}
    return is_hole_decreasing(w, depth) and wrapped <= original and shallow <= wrapped


def test_10_properties():
    t0 = time.perf_counter()
    rng = random.Random(10)
    ok = True
    for _ in range(10_000):
        x = F(rng.randrange(-10**9, 10**9), rng.randrange(1, 10**9))
        e = nicf_expand(x)
        ok = ok and cf_eval(e) == x and validate_nicf(e) and cf_eval(rcf_expand(x)) == x
        cs = convergents(e)
        ok = ok and all(abs(p1 * q0 - p0 * q1) == 1 for (p0, q0), (p1, q1) in zip(cs, cs[1:]))
    for _ in range(1000):
        a, b, c, d = (F(rng.randrange(-10**6, 10**6), rng.randrange(1, 10**3)) for _ in range(4))
        i, j = Interval(min(a, b), max(a, b)), Interval(min(c, d), max(c, d))
        ok = ok and interval_sum(i, j).length == i.length + j.length
    ok = ok and all(_wrap_preserves(t, 8) for t in _toy_trees())
    tree = c_nicf()
    w = hole_decreasing_wrap(tree)
    ok = ok and is_hole_decreasing(tree, 10) and gaps_to_depth(w, 10) == gaps_to_depth(tree, 10)
    report(10, "property suites", ok, "10^4 rationals round-trip, determinants, additivity, wraps", t0, 60)


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                pass
