"""Regular and nearest-integer continued fractions.

An expansion ``[a0; a1, ..., an]`` may carry a tail: an exact complete
quotient (``[a0; a1 : t]``) or a periodic digit block
(``[a0; a1, per(b1,b2)]``).  Expansion, evaluation and the textual syntax
are all exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from .exact import (
    QuadraticNumber,
    floor_exact,
    format_number,
    mobius_apply,
    parse_number,
    quad_normalize,
)

__all__ = [
    "Periodic",
    "CFExpansion",
    "ConvergentPair",
    "ValidityReport",
    "DepthExceeded",
    "PoleAtTail",
    "AmbiguousFixedPoint",
    "nearest_int",
    "rcf_expand",
    "nicf_expand",
    "cf_eval",
    "convergents",
    "recurrence",
    "validate_nicf",
    "parse_cf",
    "format_cf",
]

HALF = Fraction(1, 2)


class DepthExceeded(ValueError):
    pass


class PoleAtTail(ZeroDivisionError):
    pass


class AmbiguousFixedPoint(ValueError):
    pass


@dataclass(frozen=True)
class Periodic:
    """A digit block repeated forever."""

    block: tuple[int, ...]

    def __post_init__(self):
        if not self.block:
            raise ValueError("periodic block must be nonempty")
        object.__setattr__(self, "block", tuple(int(b) for b in self.block))


Tail = Union[None, Fraction, QuadraticNumber, Periodic]


@dataclass(frozen=True)
class CFExpansion:
    """Digits ``a0; a1, ..., an`` with an optional tail.

    ``kind`` records which algorithm the digits follow (``"nicf"`` or
    ``"rcf"``); it only matters when a periodic tail has to be resolved.
    """

    digits: tuple[int, ...]
    tail: Tail = None
    kind: str = field(default="nicf", compare=False)

    def __post_init__(self):
        if not self.digits:
            raise ValueError("an expansion needs at least a0")
        object.__setattr__(self, "digits", tuple(int(a) for a in self.digits))
        if isinstance(self.tail, int):
            object.__setattr__(self, "tail", Fraction(self.tail))
        if self.kind not in ("nicf", "rcf"):
            raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def is_finite(self) -> bool:
        return self.tail is None

    def digit_stream(self, n: int) -> list[int]:
        """First ``n`` digits, unrolling a periodic tail."""
        out = list(self.digits[:n])
        if isinstance(self.tail, Periodic):
            block = self.tail.block
            i = 0
            while len(out) < n:
                out.append(block[i % len(block)])
                i += 1
        return out

    def __str__(self) -> str:
        return format_cf(self)


class ConvergentPair(NamedTuple):
    p: int
    q: int


def nearest_int(x) -> int:
    """Nearest integer; exact halves round up."""
    if isinstance(x, QuadraticNumber):
        return floor_exact(x + HALF)
    return math.floor(Fraction(x) + HALF)


def _as_exact(x):
    if isinstance(x, QuadraticNumber):
        return x if x.q else Fraction(x.p, x.r)
    return Fraction(x)


def _expand(x, step, kind: str, max_depth: int) -> CFExpansion:
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    x = _as_exact(x)
    digits: list[int] = []
    seen: dict[QuadraticNumber, int] = {}
    irrational = isinstance(x, QuadraticNumber)
    while True:
        if irrational and digits:
            start = seen.get(x)
            if start is not None:
                return CFExpansion(tuple(digits[:start]), Periodic(tuple(digits[start:])), kind)
            seen[x] = len(digits)
        if len(digits) >= max_depth:
            raise DepthExceeded(f"no termination or period within {max_depth} digits")
        a = step(x)
        digits.append(a)
        rem = x - a
        if kind == "nicf":
            assert -HALF <= rem <= HALF, "nearest-integer remainder out of range"
        if not rem:
            return CFExpansion(tuple(digits), None, kind)
        x = 1 / rem


def rcf_expand(x, max_depth: int = 10_000) -> CFExpansion:
    """Regular continued fraction via ``b = floor(x)``.

    Rationals terminate (never ending in a 1 after a0); quadratic
    irrationals come back with a :class:`Periodic` tail.
    """
    return _expand(x, floor_exact, "rcf", max_depth)


def nicf_expand(x, max_depth: int = 10_000) -> CFExpansion:
    """Nearest-integer continued fraction via ``a = floor(x + 1/2)``."""
    return _expand(x, nearest_int, "nicf", max_depth)


def recurrence(digits: Sequence[int]) -> tuple[int, int, int, int]:
    """Raw ``(p_n, p_{n-1}, q_n, q_{n-1})`` of a digit list (no sign fixing)."""
    p, p1, q, q1 = 1, 0, 0, 1
    for a in digits:
        p, p1 = a * p + p1, p
        q, q1 = a * q + q1, q
    return p, p1, q, q1


def convergents(e: CFExpansion | Sequence[int]) -> list[ConvergentPair]:
    """``(p_i, q_i)`` for i = 0..n, signs normalised so that ``q_i > 0``."""
    digits = e.digits if isinstance(e, CFExpansion) else tuple(e)
    out = []
    p, p1, q, q1 = 1, 0, 0, 1
    for a in digits:
        p, p1 = a * p + p1, p
        q, q1 = a * q + q1, q
        out.append(ConvergentPair(p, q) if q > 0 else ConvergentPair(-p, -q))
    return out


def _squarefree_split(n: int) -> tuple[int, int]:
    """``n = s*s*d`` with ``d`` squarefree; returns ``(s, d)``."""
    s, d = 1, 1
    f = 2
    # trial division to the cube root leaves a cofactor with at most two prime factors
    limit = 1
    while limit**3 <= n:
        limit += 1
    while f <= limit and f * f <= n:
        e = 0
        while n % f == 0:
            n //= f
            e += 1
        s *= f ** (e // 2)
        d *= f ** (e % 2)
        f += 1 if f == 2 else 2
    r = math.isqrt(n)
    if r * r == n:
        s *= r
    else:
        d *= n
    return s, d


def _periodic_roots(block: Sequence[int]) -> list:
    P, P1, Q, Q1 = recurrence(block)
    # t = (P t + P1) / (Q t + Q1)  <=>  Q t^2 + (Q1 - P) t - P1 = 0
    if Q == 0:
        if Q1 == P:
            raise AmbiguousFixedPoint("degenerate periodic block")
        return [Fraction(P1, Q1 - P)]
    disc = (Q1 - P) ** 2 + 4 * Q * P1
    if disc < 0:
        raise AmbiguousFixedPoint("periodic block has no real fixed point")
    s, d = _squarefree_split(disc)
    roots = []
    for sgn in (1, -1):
        t = quad_normalize(P - Q1, sgn * s, 2 * Q, d)
        roots.append(t.as_fraction() if t.is_rational else t)
    return roots


def _reproduces(t, block: Sequence[int], kind: str) -> bool:
    step = nearest_int if kind == "nicf" else floor_exact
    for b in block:
        if step(t) != b:
            return False
        rem = t - b
        if not rem:
            return False
        t = 1 / rem
    return True


def _resolve_periodic(block: Sequence[int], kind: str):
    roots = [t for t in _periodic_roots(block) if isinstance(t, QuadraticNumber)]
    matches = [t for t in roots if _reproduces(t, block, kind)]
    if len(matches) != 1:
        raise AmbiguousFixedPoint(f"cannot pick a fixed point for per{tuple(block)}")
    return matches[0]


def cf_eval(e: CFExpansion):
    """Exact value of an expansion.

    Finite expansions give a :class:`~fractions.Fraction`; tails are placed
    as the complete quotient after the last digit,
    ``(p_n t + p_{n-1}) / (q_n t + q_{n-1})``.
    """
    if e.tail is None:
        p, _, q, _ = recurrence(e.digits)
        return Fraction(p, q)
    if isinstance(e.tail, Periodic):
        t = _resolve_periodic(e.tail.block, e.kind)
    else:
        t = e.tail
    p, p1, q, q1 = recurrence(e.digits)
    try:
        return _as_exact(mobius_apply(p, p1, q, q1, t))
    except ZeroDivisionError as exc:
        raise PoleAtTail(str(exc)) from exc


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    index: Optional[int] = None
    rule: Optional[str] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.valid


def validate_nicf(e: CFExpansion | Sequence[int], bound: Optional[int] = None, star: bool = False) -> ValidityReport:
    """Check the NICF digit rules, optionally ``|a_i| <= bound`` and the
    starred rules (``a0`` in {0, 1}, sign of ``a1``, sign flip after ±5).

    Periodic tails are checked across the block boundary.  The first
    violation in digit order is reported.
    """
    if not isinstance(e, CFExpansion):
        e = CFExpansion(tuple(e))
    digits = list(e.digits)
    if isinstance(e.tail, Periodic):
        block = list(e.tail.block)
        # one extra copy exposes the wrap-around successor pair
        digits = digits + block + block[:1]
    a0 = digits[0]
    if star and a0 not in (0, 1):
        return ValidityReport(False, 0, "a0-range", f"a0 = {a0} not in {{0, 1}}")
    for i in range(1, len(digits)):
        a = digits[i]
        if a in (-1, 0, 1):
            return ValidityReport(False, i, "forbidden-digit", f"a{i} = {a} is forbidden")
        if bound is not None and abs(a) > bound:
            return ValidityReport(False, i, "digit-bound", f"|a{i}| = {abs(a)} exceeds {bound}")
        prev = digits[i - 1]
        if i == 1:
            if star and ((a0 == 0 and a < 0) or (a0 == 1 and a > 0)):
                return ValidityReport(False, 1, "a1-sign", f"a0 = {a0} forces the sign of a1 = {a}")
            continue
        if prev == 2 and a < 2:
            return ValidityReport(False, i - 1, "two-successor", f"a{i-1} = 2 needs a{i} >= 2")
        if prev == -2 and a > -2:
            return ValidityReport(False, i - 1, "two-successor", f"a{i-1} = -2 needs a{i} <= -2")
        if star and abs(prev) == 5 and (prev > 0) == (a > 0):
            return ValidityReport(False, i - 1, "five-sign", f"a{i-1} = {prev} needs a{i} of opposite sign")
    return ValidityReport(True)


_CF_RE = re.compile(r"^\[(?P<body>.*)\]$", re.S)
_PER_RE = re.compile(r"^per\((?P<block>[^()]*)\)$")


def parse_cf(text: str, kind: str = "nicf") -> CFExpansion:
    """Parse ``[a0;a1,...]``, ``[a0;a1,...:tail]`` or ``[a0;a1,per(b1,b2)]``."""
    m = _CF_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a continued fraction literal: {text!r}")
    body = m["body"]
    tail: Tail = None
    if ":" in body:
        body, tail_text = body.split(":", 1)
        tail_text = tail_text.strip()
        try:
            tail = parse_number(tail_text)
        except ValueError:
            if tail_text.startswith("(") and tail_text.endswith(")"):
                tail = parse_number(tail_text[1:-1])
            else:
                raise
    head, _, rest = body.partition(";")
    digits = [int(head)]
    items = [s.strip() for s in _split_top(rest)] if rest.strip() else []
    for j, item in enumerate(items):
        pm = _PER_RE.match(item)
        if pm:
            if j != len(items) - 1 or tail is not None:
                raise ValueError("per(...) must close the expansion")
            tail = Periodic(tuple(int(b) for b in pm["block"].split(",")))
        else:
            digits.append(int(item))
    return CFExpansion(tuple(digits), tail, kind)


def _split_top(s: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def format_cf(e: CFExpansion) -> str:
    head = str(e.digits[0])
    items = [str(a) for a in e.digits[1:]]
    if isinstance(e.tail, Periodic):
        items.append("per(" + ",".join(str(b) for b in e.tail.block) + ")")
    out = "[" + head
    if items:
        out += "; " + ", ".join(items)
    if e.tail is not None and not isinstance(e.tail, Periodic):
        out += " : " + format_number(e.tail)
    return out + "]"
