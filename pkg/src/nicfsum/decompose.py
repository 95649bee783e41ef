"""Write a real number as a sum of two numbers with NICF digits bounded by 5.

Two copies of the (hole-decreasing) C_NICF tree are refined together with
density-ratio bounds 1 and 1: at every step one component is split and the
half whose interval sum still contains the target is kept.  The current
nodes enclose the summands, and their digit prefixes are the digits that
have already stabilized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .cantor import (
    CantorTree,
    ComparableTuple,
    Interval,
    Node,
    g_sets,
    hole_decreasing_wrap,
    merge_intervals,
    refine_tuple,
)
from .contfrac import CFExpansion, validate_nicf
from .exact import QuadraticNumber, floor_exact
from .nicf5 import (
    INV_MU,
    T01,
    PrefixNotRepresentable,
    TNode,
    InvalidPrefix,
    InvalidDigitForSign,
    c_nicf,
    find_node,
    make_tnode,
)

__all__ = [
    "CORE_RANGE",
    "DEFAULT_TOL",
    "OutOfRange",
    "MaxStepsExceeded",
    "CertificationFailed",
    "Decomposition",
    "CertificationReport",
    "wrapped_tree",
    "decompose_core",
    "decompose_real",
    "shift_of",
    "certify",
    "sum_coverage",
]

CORE_RANGE = Interval(2 * INV_MU, 2 - 2 * INV_MU)
DEFAULT_TOL = Fraction(1, 10**12)
HALF = Fraction(1, 2)


class OutOfRange(ValueError):
    pass


class MaxStepsExceeded(RuntimeError):
    """Step budget ran out; ``partial`` holds the last decomposition reached."""

    def __init__(self, partial: "Decomposition", tol):
        super().__init__(
            f"residual bound {float(partial.residual_bound):.3e} after {partial.steps} steps, wanted {float(tol):.3e}"
        )
        self.partial = partial
        self.tol = tol


class CertificationFailed(AssertionError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class Decomposition:
    """``x = (n + u) + v`` with ``n + u`` in ``u_enclosure`` and ``v`` in ``v_enclosure``.

    Digit prefixes already include the shift in ``a0`` of ``u``.  The
    enclosures are C_NICF nodes of types ``u_kind``/``v_kind`` (``u`` shifted
    by ``n``); ``residual_bound`` is the sum of their lengths.
    """

    shift: int
    u_digits: Optional[CFExpansion]
    v_digits: Optional[CFExpansion]
    u_enclosure: Interval
    v_enclosure: Interval
    residual_bound: object
    steps: int
    u_kind: tuple[int, int] = T01
    v_kind: tuple[int, int] = T01
    history: tuple = field(default=(), compare=False, repr=False)

    @property
    def u_prefix(self) -> tuple[int, ...]:
        return _unshift(self.u_digits, self.shift)

    @property
    def v_prefix(self) -> tuple[int, ...]:
        return _unshift(self.v_digits, 0)

    def to_dict(self) -> dict:
        from .exact import format_number, to_decimal

        def num(x):
            return {"exact": format_number(x), "decimal": to_decimal(x, 15)}

        def side(digits, iv, kind):
            return {
                "digits": list(digits.digits) if digits else [],
                "kind": list(kind),
                "enclosure": {"lo": num(iv.lo), "hi": num(iv.hi)},
            }

        return {
            "shift": self.shift,
            "u": side(self.u_digits, self.u_enclosure, self.u_kind),
            "v": side(self.v_digits, self.v_enclosure, self.v_kind),
            "residual_bound": num(self.residual_bound),
            "steps": self.steps,
        }


def _unshift(digits: Optional[CFExpansion], n: int) -> tuple[int, ...]:
    if digits is None:
        return ()
    d = list(digits.digits)
    d[0] -= n
    return tuple(d)


@lru_cache(maxsize=None)
def wrapped_tree() -> CantorTree:
    return hole_decreasing_wrap(c_nicf())


def _tnode(node: Node) -> TNode:
    # wrapped nodes of C_NICF are single original nodes (it is hole-decreasing)
    members = node.payload
    if len(members) != 1:
        raise AssertionError(f"wrapped node {node.path} spans {len(members)} original nodes")
    return members[0].payload


def _build(t: ComparableTuple, n: int, steps: int, history: tuple) -> Decomposition:
    nu, nv = t.nodes
    tu, tv = _tnode(nu), _tnode(nv)
    ud = CFExpansion((tu.prefix[0] + n,) + tu.prefix[1:]) if tu.prefix else None
    vd = CFExpansion(tv.prefix) if tv.prefix else None
    return Decomposition(
        shift=n,
        u_digits=ud,
        v_digits=vd,
        u_enclosure=nu.interval.shift(n),
        v_enclosure=nv.interval,
        residual_bound=t.total_length(),
        steps=steps,
        u_kind=tu.kind,
        v_kind=tv.kind,
        history=history,
    )


def _core(x, tol, max_steps: int, shift: int, check: bool) -> Decomposition:
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if x not in CORE_RANGE:
        raise OutOfRange(f"{x} is outside [2/mu, 2 - 2/mu]")
    tree = wrapped_tree()
    t = ComparableTuple.start([tree, tree], [1, 1])
    history = [t.total_length()]
    steps = 0
    while history[-1] > tol:
        if steps >= max_steps:
            raise MaxStepsExceeded(_build(t, shift, steps, tuple(history)), tol)
        t = refine_tuple(t, x, check=check)
        steps += 1
        history.append(t.total_length())
    return _build(t, shift, steps, tuple(history))


def decompose_core(x, tol=DEFAULT_TOL, max_steps: int = 10_000, *, check: bool = True) -> Decomposition:
    """Split ``x`` in ``[2/mu, 2 - 2/mu]`` into two points of C_NICF.

    Refines until the two enclosures have total length at most ``tol``.
    With ``check`` each step re-verifies the covering identity and
    comparability exactly.
    """
    return _core(x, tol, max_steps, 0, check)


def shift_of(x) -> int:
    """``n = floor(x - 1/2)``, so that ``x - n`` lies in ``[1/2, 3/2)``."""
    y = x - HALF
    if isinstance(y, QuadraticNumber):
        return floor_exact(y)
    return math.floor(y)


def decompose_real(x, tol=DEFAULT_TOL, max_steps: int = 10_000, *, check: bool = True) -> Decomposition:
    """Decompose any real ``x``: shift into ``[1/2, 3/2)`` and split there.

    The integer shift is carried by ``u`` (its ``a0`` and enclosure).
    """
    if isinstance(x, int):
        x = Fraction(x)
    n = shift_of(x)
    return _core(x - n, tol, max_steps, n, check)


# -- certification ---------------------------------------------------------------


@dataclass
class CertificationReport:
    passed: bool
    checks: list = field(default_factory=list)

    def __str__(self) -> str:
        return "\n".join(f"ok  {c}" for c in self.checks)


def _genuine(kind, prefix, enclosure: Interval, label: str) -> None:
    try:
        target = make_tnode(kind, prefix)
    except (InvalidPrefix, InvalidDigitForSign) as exc:
        raise CertificationFailed(f"{label}: not a node type/prefix: {exc}") from exc
    if target.interval != enclosure:
        raise CertificationFailed(f"{label}: enclosure differs from the node {target.label}")
    try:
        find_node(target)
    except PrefixNotRepresentable as exc:
        raise CertificationFailed(f"{label}: {exc}") from exc


def certify(d: Decomposition, x) -> CertificationReport:
    """Independently re-check a decomposition of ``x``; raises on failure."""
    if isinstance(x, int):
        x = Fraction(x)
    rep = CertificationReport(False)
    n = d.shift
    prefixes = {"u": d.u_prefix, "v": d.v_prefix}
    for label, prefix in prefixes.items():
        if not prefix:
            continue
        v = validate_nicf(prefix, bound=5, star=True)
        if not v:
            raise CertificationFailed(f"{label}: digit rule {v.rule} broken at index {v.index}: {v.message}")
    rep.checks.append("digit prefixes obey the bounded starred rules")

    total = d.u_enclosure.length + d.v_enclosure.length
    if total != d.residual_bound:
        raise CertificationFailed("residual bound mismatch: enclosure lengths do not add up")
    rep.checks.append("residual bound equals the sum of enclosure lengths")

    s = d.u_enclosure + d.v_enclosure
    if x not in s:
        raise CertificationFailed("x is not in the sum of the enclosures")
    rep.checks.append("x lies in the sum of the enclosures")

    _genuine(d.u_kind, prefixes["u"], d.u_enclosure.shift(-n), "u")
    _genuine(d.v_kind, prefixes["v"], d.v_enclosure, "v")
    rep.checks.append("both enclosures are nodes of the tree")
    rep.passed = True
    return rep


# -- finite-depth coverage -------------------------------------------------------


def sum_coverage(depth: int) -> tuple[list[Interval], bool]:
    """Merged interval sums of all depth-``depth`` refinements of the root pair.

    Returns the merged intervals and whether they form exactly
    ``[2/mu, 2 - 2/mu]``.
    """
    tree = wrapped_tree()
    start = ComparableTuple.start([tree, tree], [1, 1])
    merged = merge_intervals([t.sum_interval() for t in g_sets(start, depth)])
    return merged, merged == [CORE_RANGE]
