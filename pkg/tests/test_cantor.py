from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nicfsum.cantor import (
    CantorTree,
    ComparabilityViolation,
    ComparableTuple,
    Interval,
    TreeError,
    density_ratio,
    frontier_of,
    g_sets,
    gaps_to_depth,
    hg_quantities,
    hole_decreasing_wrap,
    interval_sum,
    is_hole_decreasing,
    merge_intervals,
    refine_tuple,
    union_if_covering,
)

fracs = st.fractions(min_value=-100, max_value=100, max_denominator=1000)


def middle_thirds():
    def gap(iv, _):
        third = iv.length / 3
        return Interval(iv.lo + third, iv.hi - third), None, None

    return CantorTree(Interval(F(0), F(1)), gap)


def alternating(small=F(1, 10), big=F(1, 2)):
    """Gap share alternates with depth, so children out-gap their parents."""

    def gap(iv, depth):
        share = small if depth % 2 == 0 else big
        start = iv.lo + iv.length / 3
        return Interval(start, start + iv.length * share), depth + 1, depth + 1

    return CantorTree(Interval(F(0), F(1)), gap, 0)


def lopsided():
    def gap(iv, _):
        return Interval(iv.lo + iv.length / 5, iv.lo + iv.length / 2), None, None

    return CantorTree(Interval(F(0), F(1)), gap)


@given(fracs, fracs, fracs, fracs)
def test_interval_sum_length_additive(a, b, c, d):
    i = Interval(min(a, b), max(a, b))
    j = Interval(min(c, d), max(c, d))
    s = interval_sum(i, j)
    assert s.length == i.length + j.length
    assert s == i + j


def test_union_if_covering():
    assert union_if_covering(Interval(0, 2), Interval(1, 3)) == Interval(0, 3)
    assert union_if_covering(Interval(0, 1), Interval(1, 3)) == Interval(0, 3)
    assert union_if_covering(Interval(0, 1), Interval(F(3, 2), 3)) is None


def test_merge_intervals():
    got = merge_intervals([Interval(3, 4), Interval(0, 1), Interval(1, 2), Interval(F(5, 2), 3)])
    assert got == [Interval(0, 2), Interval(F(5, 2), 4)]


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        Interval(1, 0)


def test_middle_thirds_quantities():
    t = middle_thirds()
    assert density_ratio(t, 5).value == 1
    h, g = hg_quantities(t, 4)
    assert h.value == F(1, 3) and g.value == F(1, 3)
    assert [n.interval for n in t.level(2)] == [
        Interval(F(0), F(1, 9)), Interval(F(2, 9), F(1, 3)), Interval(F(2, 3), F(7, 9)), Interval(F(8, 9), F(1))
    ]
    assert is_hole_decreasing(t, 6)


def test_bad_gap_rejected():
    t = CantorTree(Interval(F(0), F(1)), lambda iv, p: (Interval(iv.lo, iv.hi), None, None))
    with pytest.raises(TreeError):
        t.split(t.root)


def test_density_ratio_at_least_h_over_g():
    t = lopsided()
    h, g = hg_quantities(t, 5)
    assert density_ratio(t, 5).value >= h.value / g.value


@pytest.mark.parametrize("make", [middle_thirds, alternating, lopsided])
def test_wrap_preserves_point_set(make):
    t = make()
    w = hole_decreasing_wrap(t)
    assert is_hole_decreasing(w, 7)
    original = {(g.lo, g.hi) for g in gaps_to_depth(t, 14)}
    wrapped = {(g.lo, g.hi) for g in gaps_to_depth(w, 7)}
    # every wrapped gap is an original gap, and the shallow original gaps all reappear
    assert wrapped <= original
    assert {(g.lo, g.hi) for g in gaps_to_depth(t, 3)} <= wrapped
    # wrapped nodes are unions of consecutive original nodes
    for node in w.level(5):
        parts = frontier_of(node)
        assert parts[0].interval.lo == node.interval.lo and parts[-1].interval.hi == node.interval.hi
    assert density_ratio(w, 6).value >= density_ratio(t, 6).value


def test_wrap_on_alternating_changes_tree():
    t = alternating()
    assert not is_hole_decreasing(t, 4)
    w = hole_decreasing_wrap(t)
    assert any(len(frontier_of(n)) > 1 for n in w.level(2))


def test_comparable_tuple_coverage():
    t = middle_thirds()
    start = ComparableTuple.start([t, t], [1, 1])
    assert start.is_comparable()
    merged = merge_intervals([g.sum_interval() for g in g_sets(start, 6)])
    assert merged == [Interval(F(0), F(2))]


def test_refine_keeps_target():
    t = middle_thirds()
    tup = ComparableTuple.start([t, t], [1, 1])
    x = F(5, 7)
    for _ in range(20):
        tup = refine_tuple(tup, x)
        assert x in tup.sum_interval()
    assert tup.total_length() < F(1, 100)


def test_ratio_sum_condition():
    t = middle_thirds()
    with pytest.raises(ComparabilityViolation):
        ComparableTuple.start([t, t], [F(1, 2), F(1, 2)])


def test_refine_rejects_outside_point():
    t = middle_thirds()
    with pytest.raises(ValueError):
        refine_tuple(ComparableTuple.start([t, t], [1, 1]), F(3))
