"""Exact arithmetic in real quadratic fields.

Rationals are plain :class:`fractions.Fraction` objects.  Irrationals of the
form ``(p + q*sqrt(d)) / r`` are :class:`QuadraticNumber`.  Every predicate
(sign, comparison, floor) is decided with integer arithmetic only; there is
no floating point anywhere in this module.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

__all__ = [
    "ExactError",
    "ZeroDenominator",
    "NonSquarefreeDiscriminant",
    "MixedDiscriminants",
    "PoleAtInput",
    "QuadraticNumber",
    "Exact",
    "quad_normalize",
    "quad_cmp",
    "as_quadratic",
    "mobius_apply",
    "to_decimal",
    "floor_exact",
    "parse_number",
    "format_number",
    "is_rational",
    "sqrt",
]


class ExactError(ArithmeticError):
    """Base class for errors raised by exact arithmetic."""


class ZeroDenominator(ExactError, ZeroDivisionError):
    pass


class NonSquarefreeDiscriminant(ExactError, ValueError):
    pass


class MixedDiscriminants(ExactError, ValueError):
    """Two irrationals from different quadratic fields were combined."""


class PoleAtInput(ExactError, ZeroDivisionError):
    pass


def _is_squarefree(d: int) -> bool:
    if d < 2:
        return True
    f = 2
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        f += 1
    return True


_SQUAREFREE_CACHE: dict[int, bool] = {}


def _check_squarefree(d: int) -> None:
    ok = _SQUAREFREE_CACHE.get(d)
    if ok is None:
        ok = _SQUAREFREE_CACHE[d] = _is_squarefree(d)
    if not ok:
        raise NonSquarefreeDiscriminant(f"discriminant {d} is not squarefree")


class QuadraticNumber:
    """The real number ``(p + q*sqrt(d)) / r``.

    Instances are immutable and always canonical: ``gcd(p, q, r) == 1``,
    ``r > 0`` and, when the value is rational, ``q == 0`` and ``d == 0``.
    Use :func:`quad_normalize` (or the arithmetic operators) to build them;
    the constructor trusts its arguments.
    """

    __slots__ = ("p", "q", "r", "d")

    def __init__(self, p: int, q: int, r: int, d: int):
        self.p = p
        self.q = q
        self.r = r
        self.d = d

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rational(cls, x) -> "QuadraticNumber":
        x = Fraction(x)
        return cls(x.numerator, 0, x.denominator, 0)

    @staticmethod
    def _make(p: int, q: int, r: int, d: int) -> "QuadraticNumber":
        # d is assumed squarefree and > 1 whenever q != 0
        if r < 0:
            p, q, r = -p, -q, -r
        if q == 0:
            g = math.gcd(p, r)
            return QuadraticNumber(p // g, 0, r // g, 0)
        g = math.gcd(math.gcd(p, q), r)
        if g != 1:
            p //= g
            q //= g
            r //= g
        return QuadraticNumber(p, q, r, d)

    # -- inspection -------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def as_fraction(self) -> Fraction:
        if self.q:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.p, self.r)

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.p, -self.q, self.r, self.d)

    def sign(self) -> int:
        """Sign of the value, decided exactly."""
        p, q = self.p, self.q
        if q == 0:
            return (p > 0) - (p < 0)
        sp = (p > 0) - (p < 0)
        sq = 1 if q > 0 else -1
        if sp == 0 or sp == sq:
            return sq
        # opposite signs: compare p^2 with q^2 d; never equal for squarefree d > 1
        return sp if p * p > q * q * self.d else sq

    def __bool__(self) -> bool:
        return self.p != 0 or self.q != 0

    def __float__(self) -> float:
        # display only; never used in predicates
        return float(Fraction(to_decimal(self, 20)))

    def __hash__(self) -> int:
        if self.q == 0:
            return hash(Fraction(self.p, self.r))
        return hash((self.p, self.q, self.r, self.d))

    def __repr__(self) -> str:
        return f"QuadraticNumber({format_number(self)!r})"

    def __str__(self) -> str:
        return format_number(self)

    # -- arithmetic -------------------------------------------------------

    def _field(self, other: "QuadraticNumber") -> int:
        if self.q == 0:
            return other.d
        if other.q == 0 or other.d == self.d:
            return self.d
        raise MixedDiscriminants(f"sqrt({self.d}) and sqrt({other.d}) do not mix")

    def __add__(self, other):
        o = as_quadratic(other, strict=False)
        if o is None:
            return NotImplemented
        d = self._field(o)
        return self._make(self.p * o.r + o.p * self.r, self.q * o.r + o.q * self.r, self.r * o.r, d)

    __radd__ = __add__

    def __neg__(self) -> "QuadraticNumber":
        return QuadraticNumber(-self.p, -self.q, self.r, self.d)

    def __pos__(self) -> "QuadraticNumber":
        return self

    def __abs__(self) -> "QuadraticNumber":
        return -self if self.sign() < 0 else self

    def __sub__(self, other):
        o = as_quadratic(other, strict=False)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = as_quadratic(other, strict=False)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = as_quadratic(other, strict=False)
        if o is None:
            return NotImplemented
        d = self._field(o)
        return self._make(
            self.p * o.p + self.q * o.q * d,
            self.p * o.q + self.q * o.p,
            self.r * o.r,
            d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticNumber":
        p, q, r, d = self.p, self.q, self.r, self.d
        norm = p * p - q * q * d
        if norm == 0:
            raise ZeroDenominator("division by zero")
        # r / (p + q sqrt d) = r (p - q sqrt d) / norm
        return self._make(r * p, -r * q, norm, d)

    def __truediv__(self, other):
        o = as_quadratic(other, strict=False)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = as_quadratic(other, strict=False)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    # -- ordering ---------------------------------------------------------

    def _cmp(self, other) -> int:
        o = as_quadratic(other, strict=False)
        if o is None:
            return NotImplemented  # type: ignore[return-value]
        self._field(o)
        return (self - o).sign()

    def __eq__(self, other):
        o = as_quadratic(other, strict=False)
        if o is None:
            return NotImplemented
        if self.q == 0 and o.q == 0:
            return self.p == o.p and self.r == o.r
        return self.p == o.p and self.q == o.q and self.r == o.r and self.d == o.d

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __floor__(self) -> int:
        return floor_exact(self)


Exact = Union[int, Fraction, QuadraticNumber]


def quad_normalize(p: int, q: int, r: int, d: int) -> QuadraticNumber:
    """Canonical ``(p + q*sqrt(d)) / r``.

    >>> quad_normalize(-4, 2, -2, 6)
    QuadraticNumber('(2-1*sqrt(6))/1')
    """
    if r == 0:
        raise ZeroDenominator("zero denominator")
    if d < 0:
        raise NonSquarefreeDiscriminant(f"negative discriminant {d}")
    _check_squarefree(d)
    if d == 1:
        p, q = p + q, 0
    elif d == 0:
        q = 0
    return QuadraticNumber._make(p, q, r, d if q else 0)


def sqrt(d: int) -> QuadraticNumber:
    return quad_normalize(0, 1, 1, d)


def as_quadratic(x, strict: bool = True):
    if isinstance(x, QuadraticNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return QuadraticNumber.from_rational(x)
    if strict:
        raise TypeError(f"cannot treat {type(x).__name__} as an exact number")
    return None


def is_rational(x) -> bool:
    return not isinstance(x, QuadraticNumber) or x.q == 0


def quad_cmp(a, b) -> int:
    """Exact three-way comparison: -1, 0 or 1."""
    a = as_quadratic(a)
    b = as_quadratic(b)
    a._field(b)
    return (a - b).sign()


def floor_exact(x) -> int:
    """``floor(x)`` for rationals and quadratic irrationals."""
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    p, q, r = x.p, x.q, x.r
    if q == 0:
        return p // r
    m = math.isqrt(q * q * x.d)
    # q*sqrt(d) lies strictly between consecutive integers
    if q > 0:
        return (p + m) // r
    return (p - m - 1) // r


def mobius_apply(pn, pn1, qn, qn1, t):
    """Image of ``t`` under ``(pn*t + pn1) / (qn*t + qn1)``.

    Rational ``t`` gives a :class:`~fractions.Fraction`; quadratic ``t`` stays
    in its field.
    """
    if isinstance(t, QuadraticNumber) and t.q:
        num = t * pn + pn1
        den = t * qn + qn1
        if not den:
            raise PoleAtInput("q_n t + q_(n-1) vanishes")
        return num / den
    t = Fraction(t.p, t.r) if isinstance(t, QuadraticNumber) else Fraction(t)
    den = qn * t + qn1
    if den == 0:
        raise PoleAtInput("q_n t + q_(n-1) vanishes")
    return (pn * t + pn1) / den


def to_decimal(x, digits: int) -> str:
    """Round-to-nearest decimal string with ``digits`` fractional digits.

    Ties (possible only for rationals) round towards +infinity.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    scale = 10**digits
    if isinstance(x, QuadraticNumber) and x.q:
        n = floor_exact(x * scale + Fraction(1, 2))
    else:
        f = Fraction(x.p, x.r) if isinstance(x, QuadraticNumber) else Fraction(x)
        n = math.floor(f * scale + Fraction(1, 2))
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), scale)
    return f"{sign}{whole}.{frac:0{digits}d}"


_QUAD_BODY = r"""
    (?P<p>[+-]?\d+)?\s*
    (?P<sign>[+-])?\s*
    (?:(?P<q>\d+)\s*\*\s*)?
    sqrt\(\s*(?P<d>\d+)\s*\)"""
_QUAD_PAREN_RE = re.compile(
    r"^\(\s*" + _QUAD_BODY + r"\s*\)\s*(?:/\s*(?P<r>[+-]?\d+))?$", re.VERBOSE
)
_QUAD_BARE_RE = re.compile(r"^" + _QUAD_BODY + r"$", re.VERBOSE)


def parse_number(text: str):
    """Parse ``"(p+q*sqrt(d))/r"``, ``"p/q"`` or a decimal literal.

    Decimals denote the exact rational they spell out.  Rational results are
    returned as :class:`~fractions.Fraction`.
    """
    s = text.strip()
    if "sqrt" in s:
        m = _QUAD_PAREN_RE.match(s) or _QUAD_BARE_RE.match(s)
        if not m:
            raise ValueError(f"cannot parse quadratic literal {text!r}")
        p = int(m["p"] or 0)
        q = int(m["q"] or 1)
        if m["sign"] == "-":
            q = -q
        elif m["sign"] is None and m["p"] is not None:
            raise ValueError(f"missing operator in {text!r}")
        r = int(m.groupdict().get("r") or 1)
        x = quad_normalize(p, q, r, int(m["d"]))
        return x.as_fraction() if x.is_rational else x
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse number {text!r}") from exc


def format_number(x) -> str:
    """Exact literal accepted by :func:`parse_number`."""
    if isinstance(x, QuadraticNumber):
        if x.q == 0:
            x = Fraction(x.p, x.r)
        else:
            op = "+" if x.q > 0 else "-"
            return f"({x.p}{op}{abs(x.q)}*sqrt({x.d}))/{x.r}"
    x = Fraction(x)
    return str(x)
