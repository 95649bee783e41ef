import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nicfsum.exact import (
    MixedDiscriminants,
    NonSquarefreeDiscriminant,
    PoleAtInput,
    QuadraticNumber,
    ZeroDenominator,
    floor_exact,
    format_number,
    mobius_apply,
    parse_number,
    quad_cmp,
    quad_normalize,
    sqrt,
    to_decimal,
)

mpmath.mp.dps = 60

MU = quad_normalize(5, 1, 2, 21)


def mp(x):
    """High-precision float of an exact number, computed independently."""
    if isinstance(x, QuadraticNumber):
        return (mpmath.mpf(x.p) + x.q * mpmath.sqrt(x.d)) / x.r
    return mpmath.mpf(x.numerator) / x.denominator


def test_mu_value():
    assert to_decimal(MU, 9) == "4.791287847"
    assert MU == 5 - 1 / MU


def test_rational_embedding_collapses():
    x = quad_normalize(3, 0, 6, 5)
    assert x == F(1, 2)
    assert x.is_rational and x.q == 0


def test_sign_normalisation():
    x = quad_normalize(-4, 2, -2, 6)
    assert (x.p, x.q, x.r, x.d) == (2, -1, 1, 6)
    assert to_decimal(x, 6) == "-0.449490"
    assert format_number(x) == "(2-1*sqrt(6))/1"


def test_normalize_errors():
    with pytest.raises(ZeroDenominator):
        quad_normalize(1, 1, 0, 5)
    with pytest.raises(NonSquarefreeDiscriminant):
        quad_normalize(1, 1, 1, 12)


def test_compare_examples():
    assert quad_cmp(MU, 5) < 0
    assert quad_cmp(1 / MU, F(20872, 100000)) < 0
    assert quad_cmp(sqrt(6) - 2, F("0.44949")) < 0


def test_mixed_discriminants():
    with pytest.raises(MixedDiscriminants):
        quad_cmp(sqrt(2), sqrt(3))
    with pytest.raises(MixedDiscriminants):
        sqrt(2) + sqrt(3)


def test_root_constants():
    inv = 1 / MU
    assert to_decimal(inv, 6) == "0.208712"
    assert to_decimal(1 - inv, 6) == "0.791288"
    assert (1 - inv) - inv == sqrt(21) - 4
    assert sqrt(21) - 4 > F("0.58256")


def test_mobius_apply():
    # [0; 2 : mu] = mu / (2 mu + 1)
    v = mobius_apply(1, 0, 2, 1, MU)
    assert v == MU / (2 * MU + 1)
    assert abs(mp(v) - mpmath.mpf("0.4527525231651947")) < 1e-15
    with pytest.raises(PoleAtInput):
        mobius_apply(1, 0, 1, -2, F(2))


@given(st.integers(-10**6, 10**6), st.integers(-10**3, 10**3), st.integers(1, 10**4), st.sampled_from([2, 3, 5, 6, 21]))
def test_floor_matches_high_precision(p, q, r, d):
    x = quad_normalize(p, q, r, d)
    assert floor_exact(x) == int(mpmath.floor(mp(x)))


@given(
    st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 50),
    st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 50),
)
def test_order_agrees_with_high_precision(p1, q1, r1, p2, q2, r2):
    a = quad_normalize(p1, q1, r1, 21)
    b = quad_normalize(p2, q2, r2, 21)
    fa, fb = mp(a), mp(b)
    expected = (fa > fb) - (fa < fb)
    assert quad_cmp(a, b) == expected


@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(1, 30))
def test_field_identities(p, q, r):
    x = quad_normalize(p, q, r, 21)
    if x:
        assert x * x.inverse() == 1
    assert x - x == 0
    assert (x + MU) - MU == x
    assert x * x.conjugate() == x.conjugate() * x


@given(st.integers(-10**4, 10**4), st.integers(-10**4, 10**4).filter(bool), st.integers(1, 10**4), st.sampled_from([5, 6, 21]))
def test_literal_round_trip(p, q, r, d):
    x = quad_normalize(p, q, r, d)
    assert parse_number(format_number(x)) == x


def test_parse_forms():
    assert parse_number("(5+1*sqrt(21))/2") == MU
    assert parse_number("sqrt(6)") == sqrt(6)
    assert parse_number("-2+sqrt(6)") == sqrt(6) - 2
    assert parse_number("3.14159") == F(314159, 100000)
    assert parse_number("7/2") == F(7, 2)
    with pytest.raises(ValueError):
        parse_number("abc")


def test_decimal_rounding():
    assert to_decimal(F(1, 8), 2) == "0.13"
    assert to_decimal(F(-1, 8), 2) == "-0.12"
    assert to_decimal(sqrt(2), 10) == "1.4142135624"
    assert float(MU) == pytest.approx(4.791287847477920)


def test_hash_consistent_with_fraction():
    assert hash(quad_normalize(3, 0, 6, 5)) == hash(F(1, 2))
    assert len({quad_normalize(1, 1, 2, 5), quad_normalize(2, 2, 4, 5)}) == 1
