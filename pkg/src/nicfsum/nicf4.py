"""Digits bounded by 4 do not suffice.

Irrationals in ``[-1/2, 1/2)`` whose nearest-integer digits satisfy
``|a_i| <= 4`` are sorted into 40 classes by leading digits; each class has
an exact hull in ``Q(sqrt 6)``, rounded outward to five decimals.  No sum of
two such coverings meets ``I1 = [-0.627705, -0.627695]`` or ``I2 = I1 + 1``,
so sums of two such numbers miss a whole interval modulo 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .cantor import Interval, merge_intervals
from .contfrac import CFExpansion, Periodic, recurrence, validate_nicf
from .exact import QuadraticNumber, format_number, quad_normalize, to_decimal

__all__ = [
    "MAX_POS",
    "MIN_POS",
    "I1",
    "I2",
    "TABLE2_PREFIXES",
    "PRINTED_TABLE2",
    "PRINTED_TABLE3",
    "PRINTED_TABLE4",
    "TableMismatch",
    "UncoveredPrefix",
    "GapHit",
    "CoveringCase",
    "nicf4_extremes",
    "class_hull",
    "outward",
    "build_table2",
    "CoverReport",
    "verify_union_covers",
    "PairSum",
    "ListedSum",
    "GapReport",
    "verify_gap",
    "parse_coeffs",
    "format_coeffs",
]

MAX_POS = quad_normalize(-2, 1, 1, 6)  # [0; per(2,4)]
MIN_POS = MAX_POS / 2  # [0; per(4,2)]
I1 = Interval(Fraction("-0.627705"), Fraction("-0.627695"))
I2 = Interval(Fraction("0.372295"), Fraction("0.372305"))
SCALE = 10**5
ULP = Fraction(1, SCALE)

# remainder after the fixed digits -> periodic continuation realising it
_TAILS = (
    (MAX_POS, (2, 4)),
    (MIN_POS, (4, 2)),
    (-MAX_POS, (-2, -4)),
    (-MIN_POS, (-4, -2)),
)

# fixed leading digits of the 40 classes
TABLE2_PREFIXES: tuple[tuple[int, ...], ...] = (
    (-4, -4, -4), (-4, -4, -3), (-4, -4, -2), (-4, -4, 4), (-4, -4, 3), (-4, -4, 2),
    (-4, -3), (-4, -2), (-4, 2), (-4, 3),
    (-4, 4, -4), (-4, 4, -3), (-4, 4, -2), (-4, 4, 2), (-4, 4, 3), (-4, 4, 4),
    (-3, -4), (-3, -3), (-3, -2), (-3, 2, 2), (-3, 2, 3),
    (-3, 2, 4, -4), (-3, 2, 4, -3), (-3, 2, 4, -2), (-3, 2, 4, 2), (-3, 2, 4, 3), (-3, 2, 4, 4),
    (-3, 3), (-3, 4, -2), (-3, 4, -3), (-3, 4, -4), (-3, 4, 4), (-3, 4, 3), (-3, 4, 2),
    (-2, -4), (-2, -3), (-2, -2),
    (2,), (3,), (4,),
)

# published minimum / maximum expansions and covering interval per class
PRINTED_TABLE2: dict[tuple[int, ...], tuple[str, str, str, str]] = {
    (-4, -4, -4): ("[0;-4,-4,-4,per(2,4)]", "[0;-4,-4,-4,per(-2,-4)]", "-0.23621", "-0.23603"),
    (-4, -4, -3): ("[0;-4,-4,-3,per(2,4)]", "[0;-4,-4,-3,per(-2,-4)]", "-0.23654", "-0.23623"),
    (-4, -4, -2): ("[0;-4,-4,per(-2,-4)]", "[0;-4,-4,-2,per(-2,-4)]", "-0.23671", "-0.23658"),
    (-4, -4, 4): ("[0;-4,-4,4,per(2,4)]", "[0;-4,-4,4,per(-2,-4)]", "-0.23448", "-0.23425"),
    (-4, -4, 3): ("[0;-4,-4,3,per(2,4)]", "[0;-4,-4,3,per(-2,-4)]", "-0.23422", "-0.23379"),
    (-4, -4, 2): ("[0;-4,-4,2,per(2,4)]", "[0;-4,-4,per(2,4)]", "-0.23374", "-0.23355"),
    (-4, -3): ("[0;-4,-3,per(-2,-4)]", "[0;-4,-3,per(2,4)]", "-0.23311", "-0.22768"),
    (-4, -2): ("[0;-4,-2,per(-2,-4)]", "[0;-4,per(-2,-4)]", "-0.22685", "-0.22474"),
    (-4, 2): ("[0;-4,per(2,4)]", "[0;-4,2,per(2,4)]", "-0.28165", "-0.27841"),
    (-4, 3): ("[0;-4,3,per(-2,-4)]", "[0;-4,3,per(2,4)]", "-0.27717", "-0.26953"),
    (-4, 4, -4): ("[0;-4,4,-4,per(2,4)]", "[0;-4,4,-4,per(-2,-4)]", "-0.26803", "-0.26772"),
    (-4, 4, -3): ("[0;-4,4,-3,per(2,4)]", "[0;-4,4,-3,per(-2,-4)]", "-0.26862", "-0.26806"),
    (-4, 4, -2): ("[0;-4,4,per(-2,-4)]", "[0;-4,4,-2,per(-2,-4)]", "-0.26894", "-0.26870"),
    (-4, 4, 2): ("[0;-4,4,2,per(2,4)]", "[0;-4,4,per(2,4)]", "-0.26504", "-0.26488"),
    (-4, 4, 3): ("[0;-4,4,3,per(2,4)]", "[0;-4,4,3,per(-2,-4)]", "-0.26548", "-0.26508"),
    (-4, 4, 4): ("[0;-4,4,4,per(2,4)]", "[0;-4,4,4,per(-2,-4)]", "-0.26573", "-0.26550"),
    (-3, -4): ("[0;-3,-4,per(-2,-4)]", "[0;-3,-4,per(2,4)]", "-0.31011", "-0.30472"),
    (-3, -3): ("[0;-3,-3,per(-2,-4)]", "[0;-3,-3,per(2,4)]", "-0.30397", "-0.29480"),
    (-3, -2): ("[0;-3,-2,per(-2,-4)]", "[0;-3,per(-2,-4)]", "-0.29341", "-0.28989"),
    (-3, 2, 2): ("[0;-3,2,2,per(2,4)]", "[0;-3,2,per(2,4)]", "-0.38689", "-0.38583"),
    (-3, 2, 3): ("[0;-3,2,3,per(2,4)]", "[0;-3,2,3,per(-2,-4)]", "-0.39013", "-0.38730"),
    (-3, 2, 4, -4): ("[0;-3,2,4,-4,per(-2,-4)]", "[0;-3,2,4,-4,per(2,4)]", "-0.39086", "-0.39073"),
    (-3, 2, 4, -3): ("[0;-3,2,4,-3,per(-2,-4)]", "[0;-3,2,4,-3,per(2,4)]", "-0.39072", "-0.39049"),
    (-3, 2, 4, -2): ("[0;-3,2,4,-2,per(-2,-4)]", "[0;-3,2,4,per(-2,-4)]", "-0.39046", "-0.39036"),
    (-3, 2, 4, 2): ("[0;-3,per(2,4)]", "[0;-3,2,4,2,per(2,4)]", "-0.39208", "-0.39201"),
    (-3, 2, 4, 3): ("[0;-3,2,4,3,per(-2,-4)]", "[0;-3,2,4,3,per(2,4)]", "-0.39199", "-0.39181"),
    (-3, 2, 4, 4): ("[0;-3,2,4,4,per(-2,-4)]", "[0;-3,2,4,4,per(2,4)]", "-0.39181", "-0.39170"),
    (-3, 3): ("[0;-3,3,per(-2,-4)]", "[0;-3,3,per(2,4)]", "-0.38345", "-0.36898"),
    (-3, 4, -2): ("[0;-3,4,per(-2,-4)]", "[0;-3,4,-2,per(-2,-4)]", "-0.36788", "-0.36743"),
    (-3, 4, -3): ("[0;-3,4,-3,per(2,4)]", "[0;-3,4,-3,per(-2,-4)]", "-0.36727", "-0.36623"),
    (-3, 4, -4): ("[0;-3,4,-4,per(2,4)]", "[0;-3,4,-4,per(-2,-4)]", "-0.36616", "-0.36561"),
    (-3, 4, 4): ("[0;-3,4,4,per(2,4)]", "[0;-3,4,4,per(-2,-4)]", "-0.36189", "-0.36147"),
    (-3, 4, 3): ("[0;-3,4,3,per(2,4)]", "[0;-3,4,3,per(-2,-4)]", "-0.36142", "-0.36070"),
    (-3, 4, 2): ("[0;-3,4,2,per(2,4)]", "[0;-3,4,per(2,4)]", "-0.36061", "-0.36032"),
    (-2, -4): ("[0;per(-2,-4)]", "[0;-2,-4,per(2,4)]", "-0.44949", "-0.43827"),
    (-2, -3): ("[0;-2,-3,per(-2,-4)]", "[0;-2,-3,per(2,4)]", "-0.43671", "-0.41804"),
    (-2, -2): ("[0;-2,-2,per(-2,-4)]", "[0;-2,per(-2,-4)]", "-0.41524", "-0.40824"),
    (2,): ("[0;2,per(2,4)]", "[0;per(2,4)]", "0.40824", "0.44949"),
    (3,): ("[0;3,per(2,4)]", "[0;3,per(-2,-4)]", "0.28989", "0.39208"),
    (4,): ("[0;4,per(2,4)]", "[0;4,per(-2,-4)]", "0.22474", "0.28165"),
}

# sums closest to I2, then to I1, as (class, class, lo, hi)
PRINTED_TABLE3 = (
    ((-4, -2), (2,), "0.18139", "0.22475"),
    ((4,), (4,), "0.44948", "0.56330"),
)
PRINTED_TABLE4 = (
    ((-2, -4), (4,), "-0.22475", "-0.15662"),
    ((-2, -2), (-4, -2), "-0.66356", "-0.64278"),
    ((-3, 2, 4, 2), (-4, -4, 4), "-0.62656", "-0.62626"),
    ((-3, 2, 4, 4), (-4, -4, -4), "-0.62802", "-0.62773"),
    ((-3, 2, 4, -4), (-4, -4, -2), "-0.62757", "-0.62731"),
    ((-3, 4, -4), (-4, 4, 2), "-0.63120", "-0.63049"),
    ((-3, 4, 4), (-4, 4, 4), "-0.62762", "-0.62697"),
    ((-3, 4, 2), (-4, 4, -4), "-0.62864", "-0.62804"),
    ((-3, -4), (-3, -4), "-0.62022", "-0.60944"),
)


class TableMismatch(AssertionError):
    def __init__(self, row, message: str):
        super().__init__(f"{format_coeffs(row)}: {message}")
        self.row = row


class UncoveredPrefix(AssertionError):
    def __init__(self, digits):
        super().__init__(f"prefix {list(digits)} escapes the coverings")
        self.digits = tuple(digits)


class GapHit(AssertionError):
    def __init__(self, pair):
        super().__init__(f"sum {format_coeffs(pair[0])} + {format_coeffs(pair[1])} meets a target interval")
        self.pair = pair


def format_coeffs(c: Sequence[int]) -> str:
    return "<" + ",".join(str(a) for a in c) + ">"


def parse_coeffs(text: str) -> tuple[int, ...]:
    body = text.strip().strip("<>()[]")
    return tuple(int(a) for a in body.replace(" ", "").split(",") if a)


def nicf4_extremes() -> tuple[QuadraticNumber, QuadraticNumber]:
    """Smallest and largest positive irrationals with digits bounded by 4."""
    return MIN_POS, MAX_POS


def outward(iv: Interval) -> Interval:
    """Round outward to five decimals."""
    lo = Fraction(math.floor(iv.lo * SCALE), SCALE)
    hi = Fraction(-math.floor(-iv.hi * SCALE), SCALE)
    return Interval(lo, hi)


def _value(digits: Sequence[int], r):
    # [0; digits : 1/r]
    p, p1, q, q1 = recurrence((0,) + tuple(digits))
    t = 1 / r
    return (p * t + p1) / (q * t + q1)


def class_hull(digits: Sequence[int]):
    """Exact ``(min, max)`` over the class, with the expansions attaining them.

    The remainder after the fixed digits runs over the bounded tails; the
    value is monotone in it, so only the four extreme periodic tails matter
    (those allowed after the last digit).
    """
    digits = tuple(digits)
    cands = []
    for r, block in _TAILS:
        e = CFExpansion((0,) + digits, Periodic(block))
        if validate_nicf(e, bound=4):
            cands.append((_value(digits, r), e))
    if not cands:
        raise ValueError(f"{list(digits)} admits no bounded continuation")
    cands.sort(key=lambda c: c[0])
    return cands[0], cands[-1]


def _collapse(e: CFExpansion) -> CFExpansion:
    """Shortest equal form whose period is ``per(2,4)`` or ``per(-2,-4)``.

    Uses ``[.., b, per(a, b)] = [.., per(b, a)]``, e.g.
    ``[.., 2, per(4,2)] = [.., per(2,4)]``.
    """
    d, block = e.digits, e.tail.block
    best = e if block in ((2, 4), (-2, -4)) else None
    while len(d) > 1 and d[-1] == block[-1]:
        d, block = d[:-1], (block[-1],) + block[:-1]
        if block in ((2, 4), (-2, -4)):
            best = CFExpansion(d, Periodic(block))
    return best or e


@dataclass(frozen=True)
class CoveringCase:
    coeffs: tuple[int, ...]
    min_cf: CFExpansion
    max_cf: CFExpansion
    min_val: QuadraticNumber
    max_val: QuadraticNumber
    covering: Interval
    printed: Optional[Interval] = None
    typo_candidate: bool = False

    @property
    def exact(self) -> Interval:
        return Interval(self.min_val, self.max_val)

    @property
    def label(self) -> str:
        return format_coeffs(self.coeffs)

    def csv_row(self) -> list[str]:
        return [
            self.label,
            format_number(self.min_val),
            format_number(self.max_val),
            to_decimal(self.covering.lo, 5),
            to_decimal(self.covering.hi, 5),
        ]


def _printed_interval(lo: str, hi: str) -> Interval:
    return Interval(Fraction(lo), Fraction(hi))


@lru_cache(maxsize=None)
def _table2() -> tuple[CoveringCase, ...]:
    rows = []
    for coeffs in TABLE2_PREFIXES:
        (lo, lo_cf), (hi, hi_cf) = class_hull(coeffs)
        cov = outward(Interval(lo, hi))
        pr = PRINTED_TABLE2[coeffs]
        printed = _printed_interval(pr[2], pr[3])
        if cov != printed:
            if abs(cov.lo - printed.lo) > ULP or abs(cov.hi - printed.hi) > ULP:
                raise TableMismatch(coeffs, f"covering {cov.decimal(5)} vs printed {printed.decimal(5)}")
        rows.append(
            CoveringCase(
                coeffs, _collapse(lo_cf), _collapse(hi_cf), lo, hi, cov, printed, typo_candidate=cov != printed
            )
        )
    return tuple(rows)


def build_table2() -> list[CoveringCase]:
    """The 40 covering cases, computed exactly and compared with the printed
    coverings (a one-ulp disagreement is flagged, anything more raises)."""
    return list(_table2())


# -- completeness of the case split ---------------------------------------------


@dataclass
class CoverReport:
    depth: int
    leaves: int = 0
    prefixes: int = 0
    direct: int = 0
    uncovered: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.uncovered


def _children(digits: tuple[int, ...]):
    for a in (-4, -3, -2, 2, 3, 4):
        cand = digits + (a,)
        if validate_nicf((0,) + cand, bound=4):
            try:
                class_hull(cand)
            except ValueError:
                continue
            yield cand


def _covered(iv: Interval, union: list[Interval]) -> bool:
    return any(u.contains_interval(iv) for u in union)


def verify_union_covers(depth: int = 6, raise_on_failure: bool = False) -> CoverReport:
    """Every bounded digit string up to ``depth`` digits lies in the coverings.

    A string counts as covered when its exact hull sits inside the union of
    coverings, or (above the depth limit) when all its continuations are
    covered.  Strings of full length must be covered directly.
    """
    union = merge_intervals([c.covering for c in build_table2()])
    rep = CoverReport(depth)

    def visit(digits) -> bool:
        rep.prefixes += 1
        (lo, _), (hi, _) = class_hull(digits)
        direct = _covered(Interval(lo, hi), union)
        if direct:
            rep.direct += 1
        if len(digits) == depth:
            rep.leaves += 1
            if not direct:
                rep.uncovered.append(digits)
            return direct
        ok = all([visit(c) for c in _children(digits)])
        return direct or ok

    for first in _children(()):
        visit(first)
    if raise_on_failure and rep.uncovered:
        raise UncoveredPrefix(rep.uncovered[0])
    return rep


# -- the pair sweep -------------------------------------------------------------


@dataclass(frozen=True)
class PairSum:
    first: tuple[int, ...]
    second: tuple[int, ...]
    interval: Interval

    def distance(self, target: Interval) -> Fraction:
        """Distance between the sum and ``target``; zero when they meet."""
        return max(target.lo - self.interval.hi, self.interval.lo - target.hi, Fraction(0))

    @property
    def label(self) -> str:
        return f"{format_coeffs(self.first)} + {format_coeffs(self.second)}"


@dataclass(frozen=True)
class ListedSum:
    """A published pair sum next to its recomputation.

    ``matches`` lists every pair whose covering sum agrees with the printed
    interval; a row whose own pair disagrees while another pair matches is a
    transcription slip in the printed label.
    """

    first: tuple[int, ...]
    second: tuple[int, ...]
    computed: Interval
    printed: Interval
    matches: tuple[str, ...]

    @property
    def label_ok(self) -> bool:
        return abs(self.computed.lo - self.printed.lo) <= ULP and abs(self.computed.hi - self.printed.hi) <= ULP

    @property
    def reproduced(self) -> bool:
        return bool(self.matches)

    @property
    def label(self) -> str:
        return f"{format_coeffs(self.first)} + {format_coeffs(self.second)}"


@dataclass
class GapReport:
    pairs: list
    hits: list
    nearest_i1: list
    nearest_i2: list
    listed: list = field(default_factory=list)
    undominated: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.hits and all(x.reproduced for x in self.listed) and not self.undominated

    def min_distance(self, target: Interval) -> Fraction:
        return min(p.distance(target) for p in self.pairs)


def _dominated(p: PairSum, target: Interval, listed: list[PairSum], cov: dict) -> bool:
    """Is ``p`` certified to miss ``target`` by a listed pair pushed further the
    same way?"""
    a, b = cov[p.first], cov[p.second]
    below = p.interval.hi < target.lo
    for q in listed:
        if below != (q.interval.hi < target.lo):
            continue
        for c, d in ((cov[q.first], cov[q.second]), (cov[q.second], cov[q.first])):
            if below and c.hi >= a.hi and d.hi >= b.hi:
                return True
            if not below and c.lo <= a.lo and d.lo <= b.lo:
                return True
    return False


def verify_gap(nearest: int = 12, raise_on_failure: bool = False) -> GapReport:
    """Sweep all unordered pairs of coverings against ``I1`` and ``I2``.

    Besides the disjointness check, the published nearest sums are
    recomputed, and every pair is checked to be dominated by a published
    pair on the same side of each target.
    """
    rows = build_table2()
    cov = {r.coeffs: r.covering for r in rows}
    pairs = []
    for i, a in enumerate(rows):
        for b in rows[i:]:
            pairs.append(PairSum(a.coeffs, b.coeffs, a.covering + b.covering))
    hits = [p for p in pairs if p.distance(I1) == 0 or p.distance(I2) == 0]
    if raise_on_failure and hits:
        raise GapHit((hits[0].first, hits[0].second))
    rep = GapReport(
        pairs,
        hits,
        sorted(pairs, key=lambda p: (p.distance(I1), p.label))[:nearest],
        sorted(pairs, key=lambda p: (p.distance(I2), p.label))[:nearest],
    )
    for target, printed in ((I2, PRINTED_TABLE3), (I1, PRINTED_TABLE4)):
        listed = []
        for first, second, lo, hi in printed:
            s = cov[first] + cov[second]
            want = _printed_interval(lo, hi)
            matches = tuple(
                p.label
                for p in pairs
                if abs(p.interval.lo - want.lo) <= ULP and abs(p.interval.hi - want.hi) <= ULP
            )
            rep.listed.append(ListedSum(first, second, s, want, matches))
            listed.append(PairSum(first, second, s))
        for p in pairs:
            if not _dominated(p, target, listed, cov):
                rep.undominated.append((p.label, "I1" if target is I1 else "I2"))
    return rep
