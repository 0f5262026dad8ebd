"""Optimal lid lengths for single and strong double covers.

The search keeps a bracket ``(lo, hi]`` with ``lo`` infeasible and ``hi``
feasible. Every feasible probe is followed by a shrink step that pulls the
witness cover down to a length pinned by a critical block, and that length
is re-probed before it replaces ``hi``.

Exact termination: an optimal cover has a chain of ``j <= m`` abutting lids
whose ends are endpoints of H (plus 0 and 1 for double covers), so the
optimum is ``(q - p) / j``. With ``D`` the common denominator of the
endpoints, two distinct such values differ by at least ``1 / (D m^2)``.
Once the bracket is narrower than that it holds exactly one of them, and
that one is the answer.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .core import INFINITY, PrioritySet, h_star, total_measure
from .covers import (
    Block,
    Kind,
    LidCover,
    double_cover_feasible,
    maximal_blocks,
    single_cover_feasible,
)


@dataclass(frozen=True)
class OptResult:
    length: Fraction | float  # INFINITY when no cover exists at any length
    cover: Optional[LidCover]
    probes: int = 0

    @property
    def finite(self) -> bool:
        return self.length != INFINITY


def shrink_to_feasible(blocks: Sequence[Block], p: PrioritySet) -> Fraction:
    """How far every lid can shrink while keeping a cover of the same kind.

    Each lid at position ``i`` of its block may lose ``slack / i``, where the
    slack is the distance from its right end back to the last priority
    endpoint it must keep: the right end of the segment it reaches, or that
    segment's left end when the lid stops inside it. Pass ``h_star(p)`` for
    strong double covers so 0 and 1 act as endpoints.
    """
    if not blocks:
        raise ValueError("no blocks to shrink")
    lefts, rights = p.lefts, p.rights
    best = None
    for block in blocks:
        for i, lid in enumerate(block.lids, start=1):
            r = lid.right
            h = bisect_right(lefts, r)
            if h == 0:
                slack = r
            elif r >= rights[h - 1]:
                slack = r - rights[h - 1]
            else:
                slack = r - lefts[h - 1]
            cand = slack / i
            if best is None or cand < best:
                best = cand
    return max(best, Fraction(0))


def _search(
    p: PrioritySet,
    m: int,
    lower: Fraction,
    feasible: Callable[[Fraction], Optional[LidCover]],
    shrink_set: PrioritySet,
) -> OptResult:
    probes = 0

    def probe(l):
        nonlocal probes
        probes += 1
        return feasible(l)

    cover = probe(lower)
    if cover is not None:
        return OptResult(lower, cover, probes)

    def tighten(l, c):
        s = shrink_to_feasible(maximal_blocks(c), shrink_set)
        if s > 0 and l - s > lower:
            c2 = probe(l - s)
            if c2 is not None:
                return l - s, c2
        return l, c

    lo = lower
    hi = Fraction(1)
    cover = probe(hi)
    if cover is None:
        raise RuntimeError(f"no cover even at length 1 with {m} lids")
    hi, cover = tighten(hi, cover)

    denom = p.denominator
    gap = Fraction(1, denom * m * m)
    while hi - lo >= gap:
        mid = (lo + hi) / 2
        c = probe(mid)
        if c is None:
            lo = mid
        else:
            hi, cover = tighten(mid, c)

    # the only value of the form u / (denom * j), j <= m, inside (lo, hi]
    exact = None
    for j in range(1, m + 1):
        q = denom * j
        v = Fraction(math.floor(hi * q), q)
        if v > lo:
            exact = v
            break
    if exact is not None and exact != hi:
        c = probe(exact)
        if c is not None:
            hi, cover = exact, c
    return OptResult(hi, cover, probes)


def min_double_lid_length(p: PrioritySet, m: int) -> OptResult:
    """Smallest length admitting a strong double cover with ``m`` lids."""
    if m < 1:
        raise ValueError("a strong double cover needs at least one lid")
    if m == 1:
        if p:
            return OptResult(INFINITY, None, 0)
        return OptResult(Fraction(1), double_cover_feasible(p, 1, 1), 1)
    lower = (1 + total_measure(p)) / m
    return _search(p, m, lower, lambda l: double_cover_feasible(p, m, l), h_star(p))


def min_single_lid_length(p: PrioritySet, m: int) -> OptResult:
    """Smallest length admitting a single cover with ``m`` lids.

    With no lids the answer is 0 for an empty set and infinite otherwise.
    """
    if m < 0:
        raise ValueError("lid count must be non-negative")
    if m == 0:
        if p:
            return OptResult(INFINITY, None, 0)
        return OptResult(Fraction(0), single_cover_feasible(p, 0, 0), 0)
    lower = total_measure(p) / m
    return _search(p, m, lower, lambda l: single_cover_feasible(p, m, l), p)


def candidate_lengths(p: PrioritySet, m: int) -> list[Fraction]:
    """All ``(q - p) / j`` over endpoints of H with 0 and 1, ``1 <= j <= m``."""
    pts = h_star(p).endpoints
    out = {Fraction(0)}
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            d = b - a
            for j in range(1, m + 1):
                out.add(d / j)
    return sorted(out)


def brute_force_min_length(p: PrioritySet, m: int, kind: Kind) -> Fraction | float:
    """Smallest candidate length that passes the feasibility check.

    Meant for small instances; scans every candidate in increasing order.
    """
    check = single_cover_feasible if kind == Kind.SINGLE else double_cover_feasible
    if kind == Kind.SINGLE and m == 0:
        return Fraction(0) if not p else INFINITY
    if kind == Kind.STRONG_DOUBLE and m == 1 and p:
        return INFINITY
    for c in candidate_lengths(p, m):
        if check(p, m, c) is not None:
            return c
    return INFINITY
