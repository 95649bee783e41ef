"""The Cantor set of nearest-integer expansions with digits bounded by 5.

Nodes are typed intervals ``T_{u,v}(a)``: with ``a = [a0, ..., an]`` the
endpoints are ``[a; u : mu]`` and ``[a; v : -mu]`` where
``mu = (5 + sqrt(21)) / 2`` is the extreme complete quotient.  The root is
``T_{0,1} = [1/mu, 1 - 1/mu]``.  Each node type has a fixed gap rule; the
children are again typed nodes, and the construction removes exactly the
rationals and the reals whose expansion breaks the starred digit rules.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .cantor import CantorTree, Interval, Node
from .contfrac import CFExpansion, nicf_expand, recurrence, validate_nicf
from .exact import QuadraticNumber, floor_exact, quad_normalize, to_decimal

__all__ = [
    "MU",
    "INV_MU",
    "ROOT_INTERVAL",
    "OMEGA_BOUND",
    "TABLE1_BOUNDS",
    "GLOBAL_RATIO_BOUND",
    "TNode",
    "InvalidDigitForSign",
    "InvalidPrefix",
    "PrefixNotRepresentable",
    "Undecided",
    "BoundViolated",
    "Status",
    "MembershipVerdict",
    "kind_label",
    "make_tnode",
    "root_node",
    "endpoint_p",
    "expand_node",
    "c_nicf",
    "find_node",
    "node_for_prefix",
    "locate",
    "Table1Row",
    "Table1Report",
    "verify_table1",
    "verify_omega",
    "cylinder_oracle",
    "tree_cylinders",
]

MU = quad_normalize(5, 1, 2, 21)
INV_MU = 1 / MU
ROOT_INTERVAL = Interval(INV_MU, 1 - INV_MU)
OMEGA_BOUND = (quad_normalize(0, 1, 1, 5) - 1) / 2

PLUS_DIGITS = frozenset({-5, -4, -3, 2, 3, 4})
MINUS_DIGITS = frozenset({-4, -3, -2, 3, 4, 5})

T01 = (0, 1)
T25 = (2, 5)
T35 = (3, 5)
TM5M2 = (-5, -2)
TM5M3 = (-5, -3)
KINDS = (T01, T25, T35, TM5M2, TM5M3) + tuple((b, b + 1) for b in (-5, -4, -3, 2, 3, 4))

# printed ratio bounds, in the order of the two remaining intervals as listed
TABLE1_BOUNDS: dict[tuple[int, int], tuple[Fraction, ...]] = {
    T01: (Fraction("2.58205"),),
    (2, 3): (Fraction("2.89191"), Fraction("2.18031")),
    (3, 4): (Fraction("2.81108"), Fraction("2.30709")),
    (4, 5): (Fraction("2.76375"), Fraction("2.37311")),
    (-3, -2): (Fraction("2.18031"), Fraction("2.89191")),
    (-4, -3): (Fraction("2.30709"), Fraction("2.81108")),
    (-5, -4): (Fraction("2.37311"), Fraction("2.76375")),
    T25: (Fraction("1.88937"), Fraction("1.97434")),
    T35: (Fraction("1.76035"), Fraction("1.06122")),
    TM5M2: (Fraction("1.97434"), Fraction("1.88937")),
    TM5M3: (Fraction("1.06122"), Fraction("1.76035")),
}
GLOBAL_RATIO_BOUND = Fraction("1.06122")


class InvalidDigitForSign(ValueError):
    pass


class InvalidPrefix(ValueError):
    pass


class PrefixNotRepresentable(LookupError):
    pass


class Undecided(RuntimeError):
    def __init__(self, depth: int):
        super().__init__(f"membership not resolved within depth {depth}")
        self.depth = depth


class BoundViolated(AssertionError):
    pass


def kind_label(kind: tuple[int, int]) -> str:
    return f"T_{{{kind[0]},{kind[1]}}}"


@dataclass(frozen=True)
class TNode:
    """Typed interval ``T_{u,v}(prefix)``; ``interval`` is in value order."""

    kind: tuple[int, int]
    prefix: tuple[int, ...]
    interval: Interval = field(compare=False, repr=False)

    @property
    def parity(self) -> int:
        return (len(self.prefix) - 1) % 2

    @property
    def label(self) -> str:
        if self.kind == T01:
            return kind_label(T01)
        return f"{kind_label(self.kind)}([{', '.join(map(str, self.prefix))}])"

    def endpoint_tails(self):
        """Complete quotients after the prefix for both endpoints (low, high tail)."""
        u, v = self.kind
        return u + INV_MU, v - INV_MU


def _tail_value(prefix: Sequence[int], t):
    p, p1, q, q1 = recurrence(prefix)
    return (t * p + p1) / (t * q + q1)


def _check_star_prefix(digits: Sequence[int]) -> None:
    rep = validate_nicf(CFExpansion(tuple(digits)), bound=5, star=True)
    if not rep:
        raise InvalidPrefix(f"{list(digits)} is not a valid prefix: {rep.message}")


def endpoint_p(prefix: Sequence[int], k: int, sign: str):
    """``P_{k+}(prefix) = [prefix, k : mu]`` or ``P_{k-}(prefix) = [prefix, k : -mu]``."""
    if sign in ("+", "plus"):
        if k not in PLUS_DIGITS:
            raise InvalidDigitForSign(f"{k} is not allowed with +mu")
        t = MU
    elif sign in ("-", "minus"):
        if k not in MINUS_DIGITS:
            raise InvalidDigitForSign(f"{k} is not allowed with -mu")
        t = -MU
    else:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    digits = tuple(prefix) + (k,)
    _check_star_prefix(digits)
    return _tail_value(digits, t)


def make_tnode(kind: tuple[int, int], prefix: Sequence[int] = ()) -> TNode:
    """Build ``T_{u,v}(prefix)`` with exact endpoints (root when ``kind == (0, 1)``)."""
    kind = tuple(kind)
    if kind == T01:
        return TNode(T01, (), ROOT_INTERVAL)
    if kind not in KINDS:
        raise InvalidPrefix(f"unknown node type {kind}")
    u, v = kind
    prefix = tuple(prefix)
    if not prefix:
        raise InvalidPrefix("typed nodes need a nonempty prefix")
    a = endpoint_p(prefix, u, "+")
    b = endpoint_p(prefix, v, "-")
    return TNode(kind, prefix, Interval(a, b) if a < b else Interval(b, a))


def root_node() -> TNode:
    return make_tnode(T01)


def _gap_rule(t: TNode):
    """``(gap endpoints, child descriptors)`` from the gap table, unordered."""
    a = t.prefix
    u, v = t.kind
    if t.kind == T01:
        c1 = _tail_value((0, 2), MU)
        c2 = _tail_value((1, -2), -MU)
        return (c1, c2), ((T25, (0,)), (TM5M2, (1,)))
    if v == u + 1:
        c1 = endpoint_p(a + (u,), 2, "+")
        c2 = endpoint_p(a + (v,), -2, "-")
        return (c1, c2), ((T25, a + (u,)), (TM5M2, a + (v,)))
    k, children = {
        T25: (3, ((2, 3), T35)),
        T35: (4, ((3, 4), (4, 5))),
        TM5M2: (-3, (TM5M3, (-3, -2))),
        TM5M3: (-4, ((-5, -4), (-4, -3))),
    }[t.kind]
    c1 = endpoint_p(a, k, "-")
    c2 = endpoint_p(a, k, "+")
    return (c1, c2), ((children[0], a), (children[1], a))


def expand_node(t: TNode) -> tuple[Interval, TNode, TNode]:
    """Gap and value-ordered children of a typed node.

    The parity flip of the child order is resolved here, so ``left`` always
    holds the smaller values.  Partition exactness is asserted.
    """
    (c1, c2), (d1, d2) = _gap_rule(t)
    gap = Interval(c1, c2) if c1 < c2 else Interval(c2, c1)
    n1 = make_tnode(*d1)
    n2 = make_tnode(*d2)
    left, right = (n1, n2) if n1.interval.lo < n2.interval.lo else (n2, n1)
    iv = t.interval
    if not (
        left.interval.lo == iv.lo
        and left.interval.hi == gap.lo
        and gap.hi == right.interval.lo
        and right.interval.hi == iv.hi
    ):
        raise AssertionError(f"partition of {t.label} is not exact")
    return gap, left, right


def _gap_fn(interval: Interval, t: TNode):
    gap, left, right = expand_node(t)
    return gap, left, right


@lru_cache(maxsize=None)
def c_nicf() -> CantorTree:
    """The shared lazily expanded tree (node payloads are :class:`TNode`)."""
    root = root_node()
    return CantorTree(root.interval, _gap_fn, root, ratio_bound=GLOBAL_RATIO_BOUND, name="C_NICF")


def find_node(target: TNode, tree: Optional[CantorTree] = None) -> Node:
    """Locate a typed node in the tree by descending through containing nodes."""
    tree = tree or c_nicf()
    node = tree.root
    tiv = target.interval
    while True:
        if node.payload == target:
            return node
        if node.interval.length < tiv.length:
            break
        s = tree.split(node)
        if s.left.interval.contains_interval(tiv):
            node = s.left
        elif s.right.interval.contains_interval(tiv):
            node = s.right
        else:
            break
    raise PrefixNotRepresentable(f"{target.label} is not a node of the tree")


def node_for_prefix(digits: Sequence[int] | CFExpansion, case: Optional[str] = None, tree: Optional[CantorTree] = None) -> Node:
    """The node ``T_{a_n, a_n+1}`` (case ``"i"``) or ``T_{a_n-1, a_n}``
    (case ``"ii"``) over ``[a0, ..., a_{n-1}]``.

    Without an explicit case, (i) is used whenever ``a_n`` allows it.
    """
    if isinstance(digits, CFExpansion):
        if digits.tail is not None:
            raise PrefixNotRepresentable("expected a finite expansion")
        digits = digits.digits
    digits = tuple(digits)
    if len(digits) < 2:
        raise PrefixNotRepresentable("need at least one digit after a0")
    rep = validate_nicf(digits, bound=5, star=True)
    if not rep:
        raise PrefixNotRepresentable(rep.message)
    an = digits[-1]
    if case is None:
        case = "i" if an in PLUS_DIGITS else "ii"
    if case == "i":
        if an not in PLUS_DIGITS:
            raise PrefixNotRepresentable(f"case (i) needs a_n in {sorted(PLUS_DIGITS)}")
        kind = (an, an + 1)
    elif case == "ii":
        if an not in MINUS_DIGITS:
            raise PrefixNotRepresentable(f"case (ii) needs a_n in {sorted(MINUS_DIGITS)}")
        kind = (an - 1, an)
    else:
        raise ValueError("case must be 'i' or 'ii'")
    try:
        target = make_tnode(kind, digits[:-1])
    except (InvalidPrefix, InvalidDigitForSign) as exc:
        raise PrefixNotRepresentable(str(exc)) from exc
    return find_node(target, tree)


# -- membership -----------------------------------------------------------------


class Status(enum.Enum):
    IN_SET = "InSet"
    IN_GAP = "InGapAt"
    OUTSIDE_ROOT = "OutsideRoot"
    RATIONAL_EXCLUDED = "RationalExcluded"


@dataclass(frozen=True)
class MembershipVerdict:
    status: Status
    path: Optional[str] = None
    gap: Optional[Interval] = None
    expansion: Optional[CFExpansion] = None

    def __str__(self) -> str:
        if self.path is None:
            return self.status.value
        return f"{self.status.value}({self.path or 'root'})"


def _bounds(x, k: int):
    # rational enclosure of width 10^-k
    scale = 10**k
    if isinstance(x, QuadraticNumber) and x.q:
        n = floor_exact(x * scale)
        return Fraction(n, scale), Fraction(n + 1, scale)
    return x, x


def _sign_diff(x, y, max_digits: int = 400) -> int:
    """Sign of ``x - y`` even when they live in different quadratic fields."""
    dx = x.d if isinstance(x, QuadraticNumber) and x.q else 0
    dy = y.d if isinstance(y, QuadraticNumber) and y.q else 0
    if dx == 0 or dy == 0 or dx == dy:
        return (x > y) - (x < y)
    k = 8
    while k <= max_digits:
        xl, xh = _bounds(x, k)
        yl, yh = _bounds(y, k)
        if xh < yl:
            return -1
        if yh < xl:
            return 1
        k *= 2
    raise Undecided(max_digits)


def locate(x, max_depth: int = 400, tree: Optional[CantorTree] = None) -> MembershipVerdict:
    """Decide where ``x`` sits relative to the Cantor set.

    Rationals inside the root always end up in a gap; the gap's path is the
    witness.  Quadratic irrationals whose (periodic) expansion obeys the
    starred digit rules are in the set; any other quadratic irrational is
    found in a gap by descending the tree.
    """
    tree = tree or c_nicf()
    root = tree.root.interval
    if _sign_diff(x, root.lo) < 0 or _sign_diff(x, root.hi) > 0:
        return MembershipVerdict(Status.OUTSIDE_ROOT)
    irrational = isinstance(x, QuadraticNumber) and x.q
    if irrational:
        e = nicf_expand(x)
        if validate_nicf(e, bound=5, star=True):
            return MembershipVerdict(Status.IN_SET, expansion=e)
    node = tree.root
    for _ in range(max_depth):
        s = tree.split(node)
        if _sign_diff(x, s.gap.lo) > 0 and _sign_diff(x, s.gap.hi) < 0:
            status = Status.IN_GAP if irrational else Status.RATIONAL_EXCLUDED
            return MembershipVerdict(status, node.path, s.gap)
        node = s.left if _sign_diff(x, s.gap.lo) <= 0 else s.right
    raise Undecided(max_depth)


# -- table verification ---------------------------------------------------------


@dataclass
class Table1Row:
    kind: tuple[int, int]
    bound: Fraction
    count: int = 0
    min_ratio: object = None
    min_path: str = ""
    sided_ok: bool = True

    @property
    def passed(self) -> bool:
        return self.count == 0 or (self.min_ratio > self.bound)


@dataclass
class Table1Report:
    depth: int
    rows: dict = field(default_factory=dict)
    nodes: int = 0
    global_min: object = None
    global_path: str = ""
    omega_ok: bool = True
    omega_max: object = 0
    formula_ok: bool = True
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            not self.failures
            and self.omega_ok
            and self.formula_ok
            and all(r.passed for r in self.rows.values())
            and self.global_min > GLOBAL_RATIO_BOUND
        )


def _gap_tails(t: TNode):
    """Gap endpoint tails (complete quotients after the prefix), unordered."""
    u, v = t.kind
    if v == u + 1:
        r2 = 1 / (2 + INV_MU)  # [0; 2 : mu]
        return u + r2, v - r2
    k = {T25: 3, T35: 4, TM5M2: -3, TM5M3: -4}[t.kind]
    return k - INV_MU, k + INV_MU


def _formula_check(t: TNode, gap: Interval, left: TNode, right: TNode) -> bool:
    """Remainder and gap sizes via ``|I - C| / (q_n^2 (I + w)(C + w))``."""
    p, p1, q, q1 = recurrence(t.prefix)
    w = Fraction(q1, q)
    i_lo, i_hi = t.endpoint_tails()
    c_a, c_b = _gap_tails(t)
    tails = sorted([i_lo, i_hi, c_a, c_b])
    im, cm, cp, ip = tails

    def size(a, b):
        return abs(a - b) / ((a + w) * (b + w) * (q * q))

    values = {tl: _tail_value(t.prefix, tl) for tl in tails}
    if {values[cm], values[cp]} != {gap.lo, gap.hi}:
        return False
    rem_a = Interval(*sorted((values[im], values[cm])))
    rem_b = Interval(*sorted((values[cp], values[ip])))
    children = {(left.interval.lo, left.interval.hi), (right.interval.lo, right.interval.hi)}
    if {(rem_a.lo, rem_a.hi), (rem_b.lo, rem_b.hi)} != children:
        return False
    if size(im, cm) != rem_a.length or size(cp, ip) != rem_b.length:
        return False
    if size(cm, cp) != gap.length:
        return False
    # ratio form of the same identity
    ratio_a = abs(im - cm) / abs(cm - cp) * (cp + w) / (im + w)
    ratio_b = abs(ip - cp) / abs(cm - cp) * (cm + w) / (ip + w)
    return ratio_a == rem_a.length / gap.length and ratio_b == rem_b.length / gap.length


def _listed_children(t: TNode) -> tuple[tuple[int, int], tuple[int, int]]:
    # children in the order the gap table lists them
    _, (d1, d2) = _gap_rule(t)
    return d1[0], d2[0]


def verify_omega(depth: int, tree: Optional[CantorTree] = None) -> tuple[bool, object, int]:
    """``|q_{n-1}/q_n| < (sqrt5 - 1)/2`` for every node prefix up to ``depth``."""
    tree = tree or c_nicf()
    ok, worst, count = True, Fraction(0), 0
    for node in tree.walk(depth + 1):
        t: TNode = node.payload
        if t.kind == T01:
            continue
        _, _, q, q1 = recurrence(t.prefix)
        w = abs(Fraction(q1, q))
        count += 1
        worst = max(worst, w)
        if not w < OMEGA_BOUND:
            ok = False
    return ok, worst, count


def verify_table1(depth: int = 8, tree: Optional[CantorTree] = None, raise_on_failure: bool = False) -> Table1Report:
    """Exact local density ratios against the printed per-type bounds.

    Every node on levels ``0 .. depth-1`` is split; its smaller ratio must
    exceed the smaller printed bound of its type (and the global bound), the
    ratio of each listed remaining interval is compared with its own printed
    number, the convergent ratio bound is checked, and the remainder/gap
    sizes are recomputed from the complete-quotient formula.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    tree = tree or c_nicf()
    rep = Table1Report(depth)
    for kind, bounds in TABLE1_BOUNDS.items():
        rep.rows[kind] = Table1Row(kind, min(bounds))
    for node in tree.walk(depth):
        t: TNode = node.payload
        s = tree.split(node)
        rep.nodes += 1
        gl = s.gap.length
        r_left = s.left.interval.length / gl
        r_right = s.right.interval.length / gl
        r = r_left if r_left <= r_right else r_right
        row = rep.rows[t.kind]
        row.count += 1
        if row.min_ratio is None or r < row.min_ratio:
            row.min_ratio, row.min_path = r, node.path
        if rep.global_min is None or r < rep.global_min:
            rep.global_min, rep.global_path = r, node.path
        if not r > row.bound:
            rep.failures.append((node.path, t.label, "ratio below bound"))
        if t.kind != T01:
            listed = _listed_children(t)
            by_kind = {s.left.payload.kind: r_left, s.right.payload.kind: r_right}
            for ck, b in zip(listed, TABLE1_BOUNDS[t.kind]):
                if not by_kind[ck] > b:
                    row.sided_ok = False
            _, _, q, q1 = recurrence(t.prefix)
            w = abs(Fraction(q1, q))
            if w > rep.omega_max:
                rep.omega_max = w
            if not w < OMEGA_BOUND:
                rep.omega_ok = False
                rep.failures.append((node.path, t.label, "omega bound"))
            if not _formula_check(t, s.gap, s.left.payload, s.right.payload):
                rep.formula_ok = False
                rep.failures.append((node.path, t.label, "size formula"))
        elif not r > TABLE1_BOUNDS[T01][0]:
            row.sided_ok = False
    if raise_on_failure and not rep.passed:
        raise BoundViolated(f"table check failed: {rep.failures[:3]}")
    return rep


def ratio_decimal(x, digits: int = 5) -> str:
    return to_decimal(x, digits)


# -- brute-force cross-check -----------------------------------------------------


def _star_strings(n: int):
    """Valid starred digit strings ``a0; a1 .. an``."""
    digits = (-5, -4, -3, -2, 2, 3, 4, 5)
    level = [(0,), (1,)]
    for _ in range(n):
        level = [s + (a,) for s in level for a in digits if validate_nicf(s + (a,), bound=5, star=True)]
    return level


def cylinder_oracle(n: int) -> list[Interval]:
    """Hulls of starred expansions sharing ``n`` digits after ``a0`` and the
    sign of the next complete quotient, evaluated straight from the digits."""
    from .contfrac import cf_eval

    tails = {1: (2 + INV_MU, MU), -1: (-MU, -2 - INV_MU)}
    out = []
    for s in _star_strings(n):
        for sign, (t1, t2) in tails.items():
            if not any(validate_nicf(s + (sign * k,), bound=5, star=True) for k in (2, 3, 4, 5)):
                continue
            a = cf_eval(CFExpansion(s, t1))
            b = cf_eval(CFExpansion(s, t2))
            out.append(Interval(a, b) if a < b else Interval(b, a))
    return sorted(out, key=lambda iv: iv.lo)


def tree_cylinders(n: int, tree: Optional[CantorTree] = None) -> list[Interval]:
    """Tree nodes of type ``T_{2,5}`` / ``T_{-5,-2}`` whose prefix has ``n``
    digits after ``a0``."""
    tree = tree or c_nicf()
    out = []
    stack = [tree.root]
    while stack:
        node = stack.pop()
        t: TNode = node.payload
        if len(t.prefix) > n + 1:
            continue
        if len(t.prefix) == n + 1 and t.kind in (T25, TM5M2):
            out.append(node.interval)
            continue
        stack.extend(tree.children(node))
    return sorted(out, key=lambda iv: iv.lo)
