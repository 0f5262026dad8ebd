"""Single and strong-double lid covers: greedy deciders, shifted forms, blocks.

Naming of the shifted forms follows the usual convention for these covers:

* a *right-shifted single* cover has every lid pushed right until its left
  endpoint sits on a priority point (the greedy built left to right);
* a *left-shifted strong double* cover is built left to right from
  ``[0, l]`` with every lid placed as far right as coverage allows; its
  mirror image, built from ``1`` leftwards, is the *right-shifted* one.

Feasibility work is done on integers: all endpoints and the lid length are
scaled to a common denominator so each probe is a tight integer loop.
"""

from __future__ import annotations

import enum
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import Lid, PrioritySet, h_star, rat


class Kind(str, enum.Enum):
    SINGLE = "single"
    STRONG_DOUBLE = "double"


class Shift(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    NONE = "none"


class InfeasibleError(ValueError):
    """No cover of the requested kind exists for the given lids and length."""


class LidCover:
    """Equal-length lids ordered by left endpoint, tagged with kind and shift.

    Covers coming out of the integer kernels keep their scaled endpoints and
    only build ``Lid`` objects when :attr:`lids` is first read, so a pure
    feasibility decision never pays for rational arithmetic.
    """

    __slots__ = ("_lids", "_build", "length", "kind", "shift")

    def __init__(self, lids, length, kind: Kind, shift: Shift = Shift.NONE):
        self._lids = tuple(lids) if lids is not None else None
        self._build = None
        self.length = length
        self.kind = kind
        self.shift = shift

    @classmethod
    def lazy(cls, build, length, kind: Kind, shift: Shift) -> "LidCover":
        cover = cls(None, length, kind, shift)
        cover._build = build
        return cover

    @property
    def lids(self) -> tuple[Lid, ...]:
        if self._lids is None:
            self._lids = tuple(self._build())
            self._build = None
        return self._lids

    def __len__(self):
        return len(self.lids)

    def __eq__(self, other):
        if not isinstance(other, LidCover):
            return NotImplemented
        return (self.as_pairs(), self.length, self.kind, self.shift) == (
            other.as_pairs(), other.length, other.kind, other.shift)

    def __hash__(self):
        return hash((tuple(self.as_pairs()), self.length, self.kind, self.shift))

    def __repr__(self):
        pairs = ", ".join(f"[{a}, {b}]" for a, b in self.as_pairs())
        return f"LidCover({self.kind.value}, {self.shift.value}, l={self.length}, lids=[{pairs}])"

    @property
    def lefts(self) -> list[Fraction]:
        return [lid.left for lid in self.lids]

    def as_pairs(self) -> list[tuple[Fraction, Fraction]]:
        return [(lid.left, lid.right) for lid in self.lids]


@dataclass(frozen=True)
class Block:
    """A chain of lids, each one's right endpoint equal to the next one's left.

    ``lid_indices`` are 0-based positions in the parent cover, increasing.
    """

    lid_indices: tuple[int, ...]
    left: Fraction
    right: Fraction
    lids: tuple[Lid, ...] = ()

    def __len__(self):
        return len(self.lid_indices)


@dataclass(frozen=True)
class ComponentPartition:
    components: tuple[tuple[int, ...], ...]

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.components]


# -- integer kernels -------------------------------------------------------


def _scale(p: PrioritySet, l: Fraction):
    """Return (lefts, rights, lid, one, scale) as ints for length ``l``."""
    b = l.denominator
    d = p.denominator
    lefts, rights = p.scaled
    if b != 1:
        lefts = [x * b for x in lefts]
        rights = [x * b for x in rights]
    return lefts, rights, l.numerator * d, d * b, d * b


def _single_greedy(L: Sequence[int], R: Sequence[int], lid: int, m: int):
    """Greedy left-to-right single cover; returns (feasible, lefts)."""
    n = len(L)
    out = []
    j = 0
    prev = None
    for _ in range(m):
        if j >= n:
            break
        if prev is not None and L[j] <= prev:
            left = prev  # segment j is partly covered: abut the previous lid
        else:
            left = L[j]
        prev = left + lid
        out.append(left)
        while j < n and R[j] <= prev:
            j += 1
    ok = j >= n
    if len(out) < m:
        filler = out[-1] if out else 0
        out.extend([filler] * (m - len(out)))
    return ok, out


def _double_greedy(L: Sequence[int], R: Sequence[int], lid: int, one: int, m: int):
    """Greedy left-to-right strong double cover; returns (feasible, lefts).

    ``a`` is the right end of the second-to-last lid (everything in H up to
    ``a`` is covered twice) and ``b`` the right end of the last lid
    (everything in [0, b] is covered at least once). The next lid starts at
    the first priority point after ``a`` that still needs a second lid, but
    never past ``b`` (no gaps) or past 1.
    """
    n = len(L)
    if m <= 0:
        return False, []
    out = [0]
    a = None
    b = lid
    g = 0
    for _ in range(1, m):
        if a is None:
            nxt = L[0] if n else one
        else:
            while g < n and R[g] <= a:
                g += 1
            nxt = (L[g] if L[g] > a else a) if g < n else one
        x = b if b < nxt else nxt
        out.append(x)
        a, b = b, x + lid
    if a is None:
        return n == 0 and b >= one, out
    while g < n and R[g] <= a:
        g += 1
    return g >= n and b >= one, out


def _h_indices(L: Sequence[int], rights: Sequence[int]) -> list[int]:
    """1-based index of the rightmost segment with left <= right (0 if none)."""
    out = []
    h = 0
    n = len(L)
    for r in rights:
        # lids are sorted by left and share a length, so rights are sorted too
        while h < n and L[h] <= r:
            h += 1
        out.append(h)
    return out


def _to_cover(Lb, lefts_int, lid_int, scale, l, kind, shift) -> LidCover:
    def build():
        rights_int = [x + lid_int for x in lefts_int]
        hs = _h_indices(Lb, rights_int)
        memo: dict[int, Fraction] = {}

        def frac(v):
            # abutting and stacked lids share endpoints; build each Fraction once
            f = memo.get(v)
            if f is None:
                f = memo[v] = Fraction(v, scale)
            return f

        return [Lid(frac(x), frac(x + lid_int), h) for x, h in zip(lefts_int, hs)]

    return LidCover.lazy(build, l, kind, shift)


# -- feasibility -----------------------------------------------------------


def single_cover_feasible(p: PrioritySet, m: int, l) -> Optional[LidCover]:
    """Right-shifted single ``l``-lid cover with ``m`` lids, or None.

    Lids left over once H is covered are stacked on the last placed lid.
    """
    l = rat(l)
    if m < 0 or l < 0:
        raise ValueError("m and l must be non-negative")
    if m == 0:
        return LidCover((), l, Kind.SINGLE, Shift.RIGHT) if not p else None
    L, R, lid, _, scale = _scale(p, l)
    ok, lefts = _single_greedy(L, R, lid, m)
    if not ok:
        return None
    return _to_cover(L, lefts, lid, scale, l, Kind.SINGLE, Shift.RIGHT)


def double_cover_feasible(p: PrioritySet, m: int, l) -> Optional[LidCover]:
    """Strong double ``l``-lid cover with ``m`` lids, or None.

    One lid suffices only when H is empty and ``l >= 1``.
    """
    l = rat(l)
    if m < 0 or l < 0:
        raise ValueError("m and l must be non-negative")
    if m == 0 or (m == 1 and p):
        return None
    L, R, lid, one, scale = _scale(p, l)
    ok, lefts = _double_greedy(L, R, lid, one, m)
    if not ok:
        return None
    return _to_cover(L, lefts, lid, scale, l, Kind.STRONG_DOUBLE, Shift.LEFT)


def single_feasible_fast(p: PrioritySet, m: int, l: Fraction) -> bool:
    if m == 0:
        return not p
    L, R, lid, _, _ = _scale(p, l)
    return _single_greedy(L, R, lid, m)[0]


def double_feasible_fast(p: PrioritySet, m: int, l: Fraction) -> bool:
    if m == 0 or (m == 1 and p):
        return False
    L, R, lid, one, _ = _scale(p, l)
    return _double_greedy(L, R, lid, one, m)[0]


# -- shifted forms ---------------------------------------------------------


def reflect_cover(cover: LidCover, p: PrioritySet) -> LidCover:
    """Mirror a cover of ``p.reflect()`` back onto ``p`` (x -> 1 - x)."""
    flipped = {Shift.LEFT: Shift.RIGHT, Shift.RIGHT: Shift.LEFT, Shift.NONE: Shift.NONE}
    L = p.lefts
    lids = []
    for lid in reversed(cover.lids):
        left, right = 1 - lid.right, 1 - lid.left
        lids.append(Lid(left, right, bisect_right(L, right)))
    return LidCover(tuple(lids), cover.length, cover.kind, flipped[cover.shift])


def build_left_shifted_double(p: PrioritySet, m: int, l) -> LidCover:
    cover = double_cover_feasible(p, m, l)
    if cover is None:
        raise InfeasibleError(f"no strong double {l}-lid cover with {m} lids")
    return cover


def build_right_shifted_double(p: PrioritySet, m: int, l) -> LidCover:
    return reflect_cover(build_left_shifted_double(p.reflect(), m, l), p)


def build_right_shifted_single(p: PrioritySet, m: int, l) -> LidCover:
    cover = single_cover_feasible(p, m, l)
    if cover is None:
        raise InfeasibleError(f"no single {l}-lid cover with {m} lids")
    return cover


def build_left_shifted_single(p: PrioritySet, m: int, l) -> LidCover:
    return reflect_cover(build_right_shifted_single(p.reflect(), m, l), p)


# -- exact checkers --------------------------------------------------------


def _counter(lids):
    lefts = sorted(lid.left for lid in lids)
    rights = sorted(lid.right for lid in lids)

    def closed(x):
        return bisect_right(lefts, x) - bisect_left(rights, x)

    def interior(x):
        return bisect_left(lefts, x) - bisect_right(rights, x)

    return closed, interior


def _probe_points(lids, p: PrioritySet, lo=Fraction(0), hi=Fraction(1)):
    """Breakpoints within [lo, hi] plus midpoints of the gaps between them."""
    pts = {lo, hi}
    for lid in lids:
        pts.update((lid.left, lid.right))
    pts.update(p.endpoints)
    pts = sorted(x for x in pts if lo <= x <= hi)
    mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return pts, mids


def uncovered_points(lids, p: PrioritySet, need: int = 1) -> list[Fraction]:
    """Probe points of H lying in fewer than ``need`` lids (empty = valid)."""
    closed, _ = _counter(lids)
    pts, mids = _probe_points(lids, p)
    return [x for x in sorted(pts + mids) if p.contains(x) and closed(x) < need]


def is_single_cover(lids, p: PrioritySet) -> bool:
    return not uncovered_points(lids, p, 1)


def is_strong_double_cover(lids, p: PrioritySet) -> bool:
    closed, _ = _counter(lids)
    pts, mids = _probe_points(lids, p)
    if any(closed(x) < 1 for x in pts + mids):
        return False
    return not uncovered_points(lids, p, 2)


def left_shift_violations(cover: LidCover, p: PrioritySet) -> list[str]:
    """Check the three structural conditions of a left-shifted double cover.

    Read over points of [0, 1]:

    1. no point lies in the interior of three or more lids, so multiplicity
       above two happens only at lid endpoints;
    2. a point in three or more lids is an endpoint of at least two of them;
    3. when two lids overlap on a priority point, the left end of their
       overlap is itself a priority point.

    Surplus lids parked at ``[1, 1 + l]`` touch [0, 1] only at 1; they are
    left out of the scan when the cover stays valid without them.
    """
    lids = list(cover.lids)
    while len(lids) > 2 and lids[-1].left >= 1 and is_strong_double_cover(lids[:-1], p):
        lids.pop()
    closed, interior = _counter(lids)
    pts, mids = _probe_points(lids, p)
    out = []
    for x in pts + mids:
        if interior(x) > 2:
            out.append(f"{x} lies inside {interior(x)} lids")
    for x in pts:
        if closed(x) >= 3:
            ends = sum(1 for lid in lids if x == lid.left or x == lid.right)
            if ends < 2:
                out.append(f"{x} is covered {closed(x)} times but ends only {ends} lids")
    for i, a in enumerate(lids):
        for j in range(i + 1, len(lids)):
            b = lids[j]
            if b.left > a.right:
                break
            lo, hi = b.left, min(a.right, b.right)
            if lo > 1 or hi < 0:
                continue
            if _meets(p, lo, hi) and not p.contains(lo):
                out.append(f"overlap [{lo}, {hi}] of lids {i} and {j} starts at a low-priority point")
    return out


def _meets(p: PrioritySet, lo, hi) -> bool:
    """True when [lo, hi] intersects H."""
    i = bisect_right(p.lefts, hi) - 1
    return i >= 0 and p.rights[i] >= lo


# -- structure -------------------------------------------------------------


def maximal_blocks(cover: LidCover) -> list[Block]:
    """Partition the lids into maximal abutting chains, ordered by left end.

    A lid joins the earliest open chain whose current right end equals its
    left end; otherwise it opens a new chain.
    """
    lids = cover.lids
    chains: list[list[int]] = []
    open_ends: dict[Fraction, list[int]] = {}
    for j, lid in enumerate(lids):
        waiting = open_ends.get(lid.left)
        if waiting:
            c = waiting.pop(0)
            chains[c].append(j)
        else:
            c = len(chains)
            chains.append([j])
        open_ends.setdefault(lid.right, []).append(c)
    blocks = [
        Block(tuple(c), lids[c[0]].left, lids[c[-1]].right, tuple(lids[i] for i in c))
        for c in chains
    ]
    blocks.sort(key=lambda bl: (bl.left, bl.lid_indices[0]))
    return blocks


def critical_blocks(cover: LidCover, p: PrioritySet, star: bool = False) -> list[Block]:
    """Chains starting at a left endpoint and ending at a right endpoint of H.

    With ``star`` the endpoints 0 and 1 count too. One chain is reported
    per terminating lid.
    """
    q = h_star(p) if star else p
    left_ends = set(q.lefts)
    right_ends = set(q.rights)
    lids = cover.lids
    parent: dict[int, Optional[int]] = {}
    reach_by_right: dict[Fraction, int] = {}
    found = []
    for j, lid in enumerate(lids):
        if lid.left in left_ends:
            parent[j] = None
        elif lid.left in reach_by_right:
            parent[j] = reach_by_right[lid.left]
        else:
            continue
        reach_by_right.setdefault(lid.right, j)
        if lid.right in right_ends:
            chain = [j]
            while parent[chain[-1]] is not None:
                chain.append(parent[chain[-1]])
            chain.reverse()
            found.append(
                Block(tuple(chain), lids[chain[0]].left, lid.right, tuple(lids[i] for i in chain))
            )
    return found


def component_partition(cover: LidCover, p: PrioritySet) -> ComponentPartition:
    """Maximal runs of consecutive lids whose pairwise overlaps meet H."""
    lids = cover.lids
    if not lids:
        return ComponentPartition(())
    comps = [[0]]
    for i in range(len(lids) - 1):
        a, b = lids[i], lids[i + 1]
        lo, hi = b.left, min(a.right, b.right)
        if lo <= hi and _meets(p, lo, hi):
            comps[-1].append(i + 1)
        else:
            comps.append([i + 1])
    return ComponentPartition(tuple(tuple(c) for c in comps))


def lid_meets_priority(lid: Lid, p: PrioritySet) -> bool:
    return _meets(p, lid.left, lid.right)
