"""Cantor sets built from an initial interval and a gap function.

A :class:`CantorTree` is a lazily expanded binary tree: splitting a node
removes an open gap and leaves a left and a right closed child.  On top of
that sit the quantities used to decide whether sums of Cantor sets fill an
interval (density ratio, relative remainder/gap sizes), the transform into a
hole-decreasing construction, and the refinement of comparable tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterator, NamedTuple, Optional, Sequence

from .exact import to_decimal

__all__ = [
    "Interval",
    "Node",
    "Split",
    "CantorTree",
    "TreeError",
    "ComparabilityViolation",
    "interval_sum",
    "union_if_covering",
    "merge_intervals",
    "TruncatedBound",
    "density_ratio",
    "hg_quantities",
    "hole_decreasing_wrap",
    "frontier_of",
    "is_hole_decreasing",
    "gaps_to_depth",
    "ComparableTuple",
    "refine_tuple",
    "g_sets",
]


class TreeError(ValueError):
    """A gap function broke the partition rules."""


class ComparabilityViolation(AssertionError):
    pass


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with exact endpoints."""

    lo: Any
    hi: Any

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def length(self):
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_open(self, x) -> bool:
        return self.lo < x < self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __add__(self, other: "Interval") -> "Interval":
        return interval_sum(self, other)

    def shift(self, n) -> "Interval":
        return Interval(self.lo + n, self.hi + n)

    def decimal(self, digits: int = 15) -> str:
        return f"[{to_decimal(self.lo, digits)}, {to_decimal(self.hi, digits)}]"


def interval_sum(a: Interval, b: Interval) -> Interval:
    """Pointwise sum ``{x + y}`` of two closed intervals."""
    return Interval(a.lo + b.lo, a.hi + b.hi)


def union_if_covering(a: Interval, b: Interval) -> Optional[Interval]:
    """``a ∪ b`` when it is a single closed interval, else ``None``.

    Uses the length criterion ``λa + λb >= λ[min lo, max hi]``.
    """
    lo = a.lo if a.lo <= b.lo else b.lo
    hi = a.hi if a.hi >= b.hi else b.hi
    if a.length + b.length >= hi - lo:
        return Interval(lo, hi)
    return None


def merge_intervals(intervals: Sequence[Interval]) -> list[Interval]:
    """Union of closed intervals as a sorted list of disjoint intervals."""
    out: list[Interval] = []
    for iv in sorted(intervals, key=lambda iv: iv.lo):
        if out and iv.lo <= out[-1].hi:
            if iv.hi > out[-1].hi:
                out[-1] = Interval(out[-1].lo, iv.hi)
        else:
            out.append(iv)
    return out


@dataclass(frozen=True)
class Node:
    """A node of a Cantor tree, addressed by its root-to-node bit path."""

    interval: Interval
    payload: Any = None
    path: str = ""

    @property
    def depth(self) -> int:
        return len(self.path)


class Split(NamedTuple):
    gap: Interval  # open
    left: Node
    right: Node


GapFn = Callable[[Interval, Any], tuple]


class CantorTree:
    """Lazily expanded Cantor construction.

    ``gap_fn(interval, payload)`` returns ``(gap, left_payload,
    right_payload)``; the children are the closed pieces left of and right
    of the open gap.  ``ratio_bound`` is an optional declared lower bound
    on the density ratio, used only to prune searches.
    """

    def __init__(
        self,
        root: Interval,
        gap_fn: GapFn,
        root_payload: Any = None,
        *,
        ratio_bound=None,
        name: str = "",
    ):
        self.root = Node(root, root_payload, "")
        self.gap_fn = gap_fn
        self.ratio_bound = ratio_bound
        self.name = name
        self._splits: dict[str, Split] = {}

    def split(self, node: Node) -> Split:
        cached = self._splits.get(node.path)
        if cached is not None:
            return cached
        iv = node.interval
        gap, lp, rp = self.gap_fn(iv, node.payload)
        if not (iv.lo < gap.lo and gap.lo < gap.hi and gap.hi < iv.hi):
            raise TreeError(f"gap {gap} not strictly inside node {node.path or 'root'} {iv}")
        s = Split(gap, Node(Interval(iv.lo, gap.lo), lp, node.path + "0"), Node(Interval(gap.hi, iv.hi), rp, node.path + "1"))
        self._splits[node.path] = s
        return s

    def children(self, node: Node) -> tuple[Node, Node]:
        s = self.split(node)
        return s.left, s.right

    def level(self, depth: int) -> list[Node]:
        """All nodes at ``depth`` in value order."""
        nodes = [self.root]
        for _ in range(depth):
            nodes = [c for n in nodes for c in self.children(n)]
        return nodes

    def walk(self, depth: int) -> Iterator[Node]:
        """Nodes at levels ``0 .. depth-1`` (those whose gap is inspected)."""
        nodes = [self.root]
        for _ in range(depth):
            yield from nodes
            nodes = [c for n in nodes for c in self.children(n)]

    def node_at(self, path: str) -> Node:
        node = self.root
        for bit in path:
            s = self.split(node)
            node = s.left if bit == "0" else s.right
        return node

    def clear_cache(self) -> None:
        self._splits.clear()


class TruncatedBound(NamedTuple):
    """An extremum taken over the nodes of the first ``depth`` levels."""

    value: Any
    depth: int
    witness: str

    def decimal(self, digits: int = 5) -> str:
        return to_decimal(self.value, digits)


def density_ratio(tree: CantorTree, depth: int) -> TruncatedBound:
    """``min(λ left, λ right) / λ gap`` minimised over levels ``< depth``.

    This is an estimate of the infimum from the inspected nodes only.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    best = None
    where = ""
    for node in tree.walk(depth):
        s = tree.split(node)
        ll, rl = s.left.interval.length, s.right.interval.length
        r = (ll if ll <= rl else rl) / s.gap.length
        if best is None or r < best:
            best, where = r, node.path
    return TruncatedBound(best, depth, where)


def hg_quantities(tree: CantorTree, depth: int) -> tuple[TruncatedBound, TruncatedBound]:
    """Relative smallest remainder ``H`` and relative biggest gap ``G``."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    h = g = None
    hw = gw = ""
    for node in tree.walk(depth):
        s = tree.split(node)
        lam = node.interval.length
        ll, rl = s.left.interval.length, s.right.interval.length
        hr = (ll if ll <= rl else rl) / lam
        gr = s.gap.length / lam
        if h is None or hr < h:
            h, hw = hr, node.path
        if g is None or gr > g:
            g, gw = gr, node.path
    return TruncatedBound(h, depth, hw), TruncatedBound(g, depth, gw)


# -- hole-decreasing transform ----------------------------------------------


def frontier_of(node: Node) -> tuple[Node, ...]:
    """Original-tree nodes making up a node of a wrapped tree."""
    return node.payload


def _common_prefix(a: str, b: str) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def _biggest_gap(tree: CantorTree, frontier: tuple[Node, ...], budget: int):
    """Largest original gap inside the union of ``frontier``.

    Ties go to the shallowest gap, then the leftmost.  Returns
    ``(gap, where)`` with ``where`` either ``("inner", k)`` for the gap
    between frontier entries ``k`` and ``k+1`` or ``("node", k, path)`` for
    the own gap of a descendant of entry ``k``.
    """
    # bound on any gap inside a node: gap < λ, or gap <= λ/(2r+1) given a ratio bound r
    factor = None
    if tree.ratio_bound is not None:
        factor = Fraction(1) / (2 * Fraction(tree.ratio_bound) + 1)

    def ub(n: Node):
        lam = n.interval.length
        return lam * factor if factor is not None else lam

    best = None  # (length, depth, lo, gap, where)

    def better(length, depth, lo) -> bool:
        if best is None:
            return True
        if length != best[0]:
            return length > best[0]
        if depth != best[1]:
            return depth < best[1]
        return lo < best[2]

    for k in range(len(frontier) - 1):
        a, b = frontier[k], frontier[k + 1]
        gap = Interval(a.interval.hi, b.interval.lo)
        depth = _common_prefix(a.path, b.path)
        if better(gap.length, depth, gap.lo):
            best = (gap.length, depth, gap.lo, gap, ("inner", k))

    stack = [(k, n) for k, n in enumerate(frontier)]
    stack.reverse()
    expanded = 0
    while stack:
        k, n = stack.pop()
        if best is not None and ub(n) < best[0]:
            continue
        expanded += 1
        if expanded > budget:
            raise TreeError("gap search budget exhausted")
        s = tree.split(n)
        if better(s.gap.length, n.depth, s.gap.lo):
            best = (s.gap.length, n.depth, s.gap.lo, s.gap, ("node", k, n.path))
        for child in (s.right, s.left):
            if ub(child) >= best[0]:
                stack.append((k, child))
    return best[3], best[4]


def _open_down(tree: CantorTree, top: Node, target_path: str):
    """Split ``top`` along the path to ``target``; returns the pieces left of
    and right of the target's gap (each in value order)."""
    left_pieces: list[Node] = []
    right_pieces: list[Node] = []
    node = top
    for bit in target_path[len(top.path):]:
        s = tree.split(node)
        if bit == "0":
            right_pieces.append(s.right)
            node = s.left
        else:
            left_pieces.append(s.left)
            node = s.right
    s = tree.split(node)
    left_pieces.append(s.left)
    right_pieces.append(s.right)
    right_pieces.reverse()
    return left_pieces, right_pieces


def hole_decreasing_wrap(tree: CantorTree, *, budget: int = 100_000) -> CantorTree:
    """Same point set, rebuilt so that gaps never grow going down.

    A wrapped node is a run of consecutive original nodes (its payload, see
    :func:`frontier_of`); it is split at the biggest original gap it
    contains.  When an original child's gap exceeds its parent's, this
    merges the child's far part with the parent's gap and the sibling, as
    in the usual interchange argument; the mirrored case (the right child's
    gap being larger) is handled symmetrically.  Every wrapped remainder
    still contains a full original child of the node owning the chosen gap,
    so the density ratio cannot drop.
    """

    def gap_fn(interval: Interval, frontier: tuple[Node, ...]):
        gap, where = _biggest_gap(tree, frontier, budget)
        if where[0] == "inner":
            k = where[1]
            return gap, frontier[: k + 1], frontier[k + 1 :]
        _, k, path = where
        lpieces, rpieces = _open_down(tree, frontier[k], path)
        return gap, frontier[:k] + tuple(lpieces), tuple(rpieces) + frontier[k + 1 :]

    return CantorTree(
        tree.root.interval,
        gap_fn,
        (tree.root,),
        ratio_bound=tree.ratio_bound,
        name=(tree.name + " (hole-decreasing)").strip(),
    )


def is_hole_decreasing(tree: CantorTree, depth: int) -> bool:
    """No child's gap exceeds its parent's, on levels ``< depth``."""
    for node in tree.walk(depth - 1 if depth > 1 else 1):
        g = tree.split(node).gap.length
        for child in tree.children(node):
            if tree.split(child).gap.length > g:
                return False
    return True


def gaps_to_depth(tree: CantorTree, depth: int) -> list[Interval]:
    """Gaps removed on levels ``< depth``, sorted."""
    return sorted((tree.split(n).gap for n in tree.walk(depth)), key=lambda iv: iv.lo)


# -- comparable tuples ---------------------------------------------------------


@dataclass(frozen=True)
class ComparableTuple:
    """Current nodes of several Cantor trees plus density-ratio bounds."""

    trees: tuple[CantorTree, ...]
    nodes: tuple[Node, ...]
    ratios: tuple[Fraction, ...]

    @classmethod
    def start(cls, trees: Sequence[CantorTree], ratios: Sequence) -> "ComparableTuple":
        t = cls(tuple(trees), tuple(tr.root for tr in trees), tuple(Fraction(r) for r in ratios))
        if sum(r / (r + 1) for r in t.ratios) < 1:
            raise ComparabilityViolation("sum of x/(x+1) is below 1")
        return t

    @property
    def intervals(self) -> list[Interval]:
        return [n.interval for n in self.nodes]

    def sum_interval(self) -> Interval:
        lo = self.nodes[0].interval.lo
        hi = self.nodes[0].interval.hi
        for n in self.nodes[1:]:
            lo = lo + n.interval.lo
            hi = hi + n.interval.hi
        return Interval(lo, hi)

    def gaps(self) -> list[Interval]:
        return [tr.split(n).gap for tr, n in zip(self.trees, self.nodes)]

    def total_length(self):
        total = 0
        for n in self.nodes:
            total = n.interval.length + total
        return total

    def comparability_failures(self) -> list[tuple[int, int]]:
        """Pairs ``(j, k)`` where ``λI_j >= x_j/(x_j+1) (x_k+1) λ gap_k`` fails."""
        gaps = self.gaps()
        bad = []
        for j, (nj, xj) in enumerate(zip(self.nodes, self.ratios)):
            lam = nj.interval.length
            for k, (gk, xk) in enumerate(zip(gaps, self.ratios)):
                if lam < gk.length * (xj / (xj + 1) * (xk + 1)):
                    bad.append((j, k))
        return bad

    def is_comparable(self) -> bool:
        return not self.comparability_failures()

    def replace(self, j: int, node: Node) -> "ComparableTuple":
        nodes = list(self.nodes)
        nodes[j] = node
        return ComparableTuple(self.trees, tuple(nodes), self.ratios)


def _split_index(t: ComparableTuple) -> int:
    # the component maximising (x_j + 1) λ(gap_j); lowest index wins ties
    best_j, best = 0, None
    for j, (gap, x) in enumerate(zip(t.gaps(), t.ratios)):
        score = gap.length * (x + 1)
        if best is None or score > best:
            best_j, best = j, score
    return best_j


def _halves(t: ComparableTuple, j: int):
    s = t.trees[j].split(t.nodes[j])
    left, right = t.replace(j, s.left), t.replace(j, s.right)
    return left, right


def refine_tuple(t: ComparableTuple, x, *, check: bool = True) -> ComparableTuple:
    """Split one component so that ``x`` stays in the tuple's interval sum.

    The component with the largest ``(x_j + 1) λ(gap_j)`` is divided; when
    ``x`` lies in both resulting sums the left child is kept.  With
    ``check`` the splitting identity and comparability of the result are
    verified exactly.
    """
    whole = t.sum_interval()
    if x not in whole:
        raise ValueError("x is not in the interval sum of the tuple")
    j = _split_index(t)
    left, right = _halves(t, j)
    ls, rs = left.sum_interval(), right.sum_interval()
    if check:
        u = union_if_covering(ls, rs)
        if u is None or u != whole:
            raise ComparabilityViolation(f"child sums do not cover the tuple sum (component {j})")
    if x in ls:
        chosen = left
    elif x in rs:
        chosen = right
    else:
        raise ComparabilityViolation("x fell into a gap of the sum")
    if check:
        bad = chosen.comparability_failures()
        if bad:
            raise ComparabilityViolation(f"comparability fails for pairs {bad}")
    return chosen


def g_sets(t: ComparableTuple, depth: int) -> list[ComparableTuple]:
    """All tuples after ``depth`` rounds of splitting (both children kept)."""
    current = [t]
    for _ in range(depth):
        nxt = []
        for tup in current:
            nxt.extend(_halves(tup, _split_index(tup)))
        current = nxt
    return current
