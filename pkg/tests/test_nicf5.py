from fractions import Fraction as F

import mpmath
import pytest

from nicfsum.cantor import Interval, gaps_to_depth, hole_decreasing_wrap, is_hole_decreasing
from nicfsum.contfrac import CFExpansion, cf_eval, parse_cf
from nicfsum.exact import quad_normalize, sqrt, to_decimal
from nicfsum.nicf5 import (
    INV_MU,
    MU,
    OMEGA_BOUND,
    ROOT_INTERVAL,
    InvalidDigitForSign,
    InvalidPrefix,
    PrefixNotRepresentable,
    Status,
    Undecided,
    cylinder_oracle,
    endpoint_p,
    expand_node,
    locate,
    make_tnode,
    node_for_prefix,
    root_node,
    tree_cylinders,
    verify_omega,
    verify_table1,
)

mpmath.mp.dps = 50


def test_mu_fixed_point():
    assert MU == 5 - 1 / MU
    assert parse_cf("[5; per(-5,5)]") and cf_eval(parse_cf("[5; per(-5,5)]")) == MU


def test_root_interval():
    assert ROOT_INTERVAL.lo == cf_eval(parse_cf("[0; per(5,-5)]"))
    assert ROOT_INTERVAL.hi == cf_eval(parse_cf("[1; per(-5,5)]"))
    assert ROOT_INTERVAL.contains_interval(Interval(F("0.20872"), F("0.79128")))
    assert ROOT_INTERVAL.length == sqrt(21) - 4


def test_root_gap_sizes():
    gap, left, right = expand_node(root_node())
    assert to_decimal(gap.lo, 5) == "0.45275" and to_decimal(gap.hi, 5) == "0.54725"
    assert gap.length < F("0.09451")
    assert left.label == "T_{2,5}([0])" and right.label == "T_{-5,-2}([1])"
    assert left.interval.length > F("0.24403") and right.interval.length > F("0.24403")
    assert min(left.interval.length, right.interval.length) / gap.length > F("2.58205")


def test_endpoint_definition():
    # P_{k+}(a) = [a, k : mu] computed from the bare continued fraction
    v = endpoint_p((0,), 3, "+")
    expected = 1 / (3 + 1 / MU)
    assert v == expected
    with pytest.raises(InvalidDigitForSign):
        endpoint_p((0,), 5, "+")
    with pytest.raises(InvalidDigitForSign):
        endpoint_p((0,), 2, "-")
    with pytest.raises(InvalidPrefix):
        endpoint_p((0, 5), 3, "+")


def test_endpoint_high_precision():
    v = endpoint_p((0, 3), -4, "-")
    mu = (5 + mpmath.sqrt(21)) / 2
    ref = 1 / (3 + 1 / (-4 - 1 / mu))
    assert abs(float(v) - float(ref)) < 1e-15


def test_children_share_endpoints_with_parent(tree):
    for node in tree.walk(6):
        s = tree.split(node)
        assert s.left.interval.lo == node.interval.lo and s.right.interval.hi == node.interval.hi
        assert s.left.interval.hi == s.gap.lo and s.gap.hi == s.right.interval.lo


def test_table1_shallow():
    rep = verify_table1(5)
    assert rep.passed
    assert rep.global_min > F("1.06122")
    assert all(r.sided_ok for r in rep.rows.values())


def test_omega_bound():
    ok, worst, count = verify_omega(7)
    assert ok and count > 100
    assert worst < OMEGA_BOUND


def test_make_tnode_orientation():
    t = make_tnode((3, 4), (0,))
    assert t.interval.lo < t.interval.hi
    # parity flips the order of the defining endpoints
    a, b = endpoint_p((0,), 3, "+"), endpoint_p((0,), 4, "-")
    assert {t.interval.lo, t.interval.hi} == {a, b}


def test_node_for_prefix(tree):
    n = node_for_prefix([0, 3])
    assert n.payload.label == "T_{3,4}([0])"
    assert node_for_prefix([0, 3], "ii").payload.label == "T_{2,3}([0])"
    assert node_for_prefix(CFExpansion((1, -4, 5)), "ii").payload.kind == (4, 5)
    with pytest.raises(PrefixNotRepresentable):
        node_for_prefix([0, 2, -3])
    with pytest.raises(PrefixNotRepresentable):
        node_for_prefix([0, 5], "i")
    with pytest.raises(PrefixNotRepresentable):
        node_for_prefix([0, 3, 6])


def test_locate_examples():
    assert locate(F(1, 10)).status is Status.OUTSIDE_ROOT
    v = locate(F(1, 2))
    assert v.status is Status.RATIONAL_EXCLUDED and v.path == ""
    assert locate(INV_MU).status is Status.IN_SET
    assert locate(1 - INV_MU).status is Status.IN_SET
    assert locate(cf_eval(parse_cf("[0; 3, per(-5,5)]"))).status is Status.IN_SET
    # different quadratic field, digits within the rules
    assert locate(sqrt(2) - 1).status is Status.IN_SET
    # digit 6, caught in the root gap
    x = cf_eval(parse_cf("[0; per(2,6)]"))
    v = locate(x)
    # x lives in Q(sqrt 3); compare through floats, the margins are wide
    assert v.status is Status.IN_GAP and float(v.gap.lo) < float(x) < float(v.gap.hi)
    # breaks the sign rule after 5
    x = cf_eval(parse_cf("[0; 3, 5, per(3)]"))
    v = locate(x)
    assert v.status is Status.IN_GAP and float(v.gap.lo) < float(x) < float(v.gap.hi)


def test_locate_rational_deep():
    x = cf_eval(CFExpansion((0, 3, -4, 2, 5, -3)))
    v = locate(x)
    assert v.status is Status.RATIONAL_EXCLUDED
    assert v.gap.contains_open(x)
    with pytest.raises(Undecided):
        locate(x, max_depth=1)


@pytest.mark.parametrize("n", range(5))
def test_cylinders_match_tree(n):
    assert cylinder_oracle(n) == tree_cylinders(n)


def test_cylinder_count():
    # two signs per string; each digit after the first has six allowed successors
    assert len(cylinder_oracle(3)) == 432


def test_tree_is_hole_decreasing(tree):
    assert is_hole_decreasing(tree, 9)


def test_wrap_of_tree_is_identity(tree):
    w = hole_decreasing_wrap(tree)
    assert [g for g in gaps_to_depth(w, 7)] == gaps_to_depth(tree, 7)
