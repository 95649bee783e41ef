from fractions import Fraction as F

import mpmath
import pytest

from nicfsum.cantor import Interval
from nicfsum.contfrac import cf_eval, parse_cf, validate_nicf
from nicfsum.exact import sqrt, to_decimal
from nicfsum.nicf4 import (
    I1,
    I2,
    MAX_POS,
    MIN_POS,
    PRINTED_TABLE2,
    TABLE2_PREFIXES,
    build_table2,
    class_hull,
    nicf4_extremes,
    outward,
    parse_coeffs,
    verify_gap,
    verify_union_covers,
)

mpmath.mp.dps = 40


def test_extremes():
    lo, hi = nicf4_extremes()
    assert hi == sqrt(6) - 2 and lo == hi / 2
    assert to_decimal(hi, 7) == "0.4494897"
    assert to_decimal(lo, 7) == "0.2247449"
    # y = [0 : 2 + x], x = [0 : 4 + y]
    assert hi == 1 / (2 + lo) and lo == 1 / (4 + hi)
    assert hi * hi + 4 * hi - 2 == 0
    assert outward(Interval(lo, hi)) == Interval(F("0.22474"), F("0.44949"))


def test_prefix_counts():
    heads = [p[0] for p in TABLE2_PREFIXES]
    assert len(TABLE2_PREFIXES) == 40 == len(set(TABLE2_PREFIXES))
    assert (heads.count(-4), heads.count(-3), heads.count(-2)) == (16, 18, 3)
    assert all(validate_nicf((0,) + p, bound=4) for p in TABLE2_PREFIXES)


def test_rows_match_print():
    rows = build_table2()
    assert len(rows) == 40
    for r in rows:
        printed = PRINTED_TABLE2[r.coeffs]
        assert abs(r.covering.lo - F(printed[2])) <= F(1, 10**5)
        assert abs(r.covering.hi - F(printed[3])) <= F(1, 10**5)
        assert r.covering.contains_interval(r.exact)
        assert r.min_val < r.max_val
        assert cf_eval(parse_cf(printed[0])) == r.min_val
        assert cf_eval(parse_cf(printed[1])) == r.max_val


def test_row_high_precision():
    # <-3,2,4,2>: minimum [0;-3,per(2,4)] evaluated independently
    m = mpmath.sqrt(6) - 2
    ref = 1 / (-3 + m)
    row = {r.coeffs: r for r in build_table2()}[(-3, 2, 4, 2)]
    assert abs(float(row.min_val) - float(ref)) < 1e-15
    assert row.covering == Interval(F("-0.39208"), F("-0.39201"))


def test_collapse_rule():
    (_, _), (hi, hi_cf) = class_hull((-4, -2))
    assert hi == cf_eval(parse_cf("[0; -4, per(-2,-4)]"))
    assert hi == cf_eval(parse_cf("[0; -4, -2, per(-4,-2)]"))
    row = {r.coeffs: r for r in build_table2()}[(-4, -2)]
    assert row.covering == Interval(F("-0.22685"), F("-0.22474"))
    assert str(row.max_cf) == "[0; -4, per(-2,-4)]"


def test_row_three():
    row = {r.coeffs: r for r in build_table2()}[(3,)]
    assert row.covering == Interval(F("0.28989"), F("0.39208"))


def test_coverings_inside_extremes():
    for r in build_table2():
        assert -MAX_POS <= r.min_val and r.max_val <= MAX_POS


def test_sample_prefixes_covered():
    rows = {r.coeffs: r.covering for r in build_table2()}
    (lo, _), (hi, _) = class_hull((2, 4, 2))
    assert rows[(2,)].contains_interval(Interval(lo, hi))
    (lo, _), (hi, _) = class_hull((-3, 3))
    assert rows[(-3, 3)].contains_interval(Interval(lo, hi))


def test_union_covers_shallow():
    rep = verify_union_covers(4)
    assert rep.passed and rep.leaves > 0


def test_gap_sweep():
    rep = verify_gap()
    assert len(rep.pairs) == 820
    assert not rep.hits
    assert rep.min_distance(I1) > 0 and rep.min_distance(I2) > 0
    assert not rep.undominated


@pytest.mark.parametrize(
    "a, b, lo, hi",
    [
        ("<-4,-2>", "<2>", "0.18139", "0.22475"),
        ("<4>", "<4>", "0.44948", "0.56330"),
        ("<-2,-4>", "<4>", "-0.22475", "-0.15662"),
        ("<-3,2,4,4>", "<-4,-4,-4>", "-0.62802", "-0.62773"),
        ("<-3,-4>", "<-3,-4>", "-0.62022", "-0.60944"),
    ],
)
def test_listed_sums(a, b, lo, hi):
    rows = {r.coeffs: r.covering for r in build_table2()}
    s = rows[parse_coeffs(a)] + rows[parse_coeffs(b)]
    assert abs(s.lo - F(lo)) <= F(1, 10**5) and abs(s.hi - F(hi)) <= F(1, 10**5)


def test_misprinted_row_is_reproduced_by_neighbour():
    rep = verify_gap()
    row = next(x for x in rep.listed if x.first == (-2, -2))
    assert not row.label_ok
    assert row.matches == ("<-4,-2> + <-2,-3>",)
    assert all(x.reproduced for x in rep.listed)
    assert sum(not x.label_ok for x in rep.listed) == 1


def test_targets_one_apart():
    assert I2.lo - I1.lo == 1 and I2.hi - I1.hi == 1
    assert -2 * MAX_POS < I1.lo and I2.hi < 2 * MAX_POS
