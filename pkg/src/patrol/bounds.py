"""Idle-time lower bound 2 min(lambda_{k-1}, Lambda_{2k}) and its witnesses."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .core import INFINITY, Instance, PrioritySet, h_star
from .covers import (
    build_left_shifted_double,
    build_left_shifted_single,
    build_right_shifted_double,
    build_right_shifted_single,
)
from .optimize import OptResult, min_double_lid_length, min_single_lid_length

log = logging.getLogger(__name__)


class Binding(str, enum.Enum):
    SINGLE = "SingleSide"
    DOUBLE = "DoubleSide"


class GeneralPosition(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class BoundReport:
    lambda_prev: Fraction | float
    Lambda_double: Fraction
    lower_bound: Fraction
    binding: Binding
    general_position: GeneralPosition
    single: Optional[OptResult] = field(default=None, repr=False, compare=False)
    double: Optional[OptResult] = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class WitnessSet:
    points: tuple[Fraction, ...]
    spacing: Fraction
    priority_count: int

    def violations(self, p: PrioritySet, k: int) -> list[str]:
        out = []
        if len(self.points) != k + 1:
            out.append(f"expected {k + 1} points, got {len(self.points)}")
        for a, b in zip(self.points, self.points[1:]):
            if b - a < self.spacing:
                out.append(f"gap {b - a} between {a} and {b} is below {self.spacing}")
        if any(not 0 <= x <= 1 for x in self.points):
            out.append("point outside [0, 1]")
        inside = sum(1 for x in self.points if p.contains(x))
        if inside != self.priority_count:
            out.append(f"priority_count {self.priority_count} but {inside} points lie in H")
        if inside < k:
            out.append(f"only {inside} priority points, need {k}")
        return out


@lru_cache(maxsize=256)
def solve_lengths(inst: Instance) -> tuple[OptResult, OptResult]:
    """``(lambda_{k-1}, Lambda_{2k})`` results, cached per instance."""
    k = inst.robots
    p = inst.priorities
    return min_single_lid_length(p, k - 1), min_double_lid_length(p, 2 * k)


def is_general_position(p: PrioritySet) -> bool:
    """Literal check: b - a a rational multiple of d - c forces a = c, b = d.

    Endpoints range over the multiset of segment endpoints. Over rationals
    every difference is a rational multiple of every nonzero one, so this
    holds only when at most one distinct endpoint exists.
    """
    pts = [e for s in p for e in (s.left, s.right)]
    for a in pts:
        for b in pts:
            for c in pts:
                for d in pts:
                    multiple = (d != c) or (b == a)
                    if multiple and not (a == c and b == d):
                        return False
    return True


def lower_bound(inst: Instance) -> BoundReport:
    single, double = solve_lengths(inst)
    lam, Lam = single.length, double.length
    if lam < Lam:
        binding, lb = Binding.SINGLE, 2 * lam
    else:
        binding, lb = Binding.DOUBLE, 2 * Lam
    p = inst.priorities
    if not p:
        gp = GeneralPosition.NOT_APPLICABLE
    else:
        gp = GeneralPosition.YES if is_general_position(p) else GeneralPosition.NO
    return BoundReport(lam, Lam, lb, binding, gp, single, double)


def _candidate_pool(inst: Instance, x: Fraction, report: BoundReport) -> list[Fraction]:
    p = inst.priorities
    k = inst.robots
    pool = set(h_star(p).endpoints)
    covers = [build_left_shifted_double(p, 2 * k, report.Lambda_double),
              build_right_shifted_double(p, 2 * k, report.Lambda_double)]
    if report.lambda_prev != INFINITY and k >= 2:
        covers.append(build_right_shifted_single(p, k - 1, report.lambda_prev))
        covers.append(build_left_shifted_single(p, k - 1, report.lambda_prev))
    for c in covers:
        for lid in c.lids:
            pool.update((lid.left, lid.right))
    # spacing ladders hung off each endpoint
    for e in h_star(p).endpoints:
        for j in range(1, k + 2):
            pool.update((e + j * x, e - j * x))
    return sorted(v for v in pool if 0 <= v <= 1)


def _longest_chain(pts: list[Fraction], high: list[bool], x: Fraction, allow_low: int):
    """Longest chain with gaps >= x using at most ``allow_low`` low points.

    ``best[u][j]`` is the longest chain ending at ``pts[j]`` with ``u`` low
    points. Sorted input lets a pointer track the prefix maximum of chains
    ending at least ``x`` before the current point.
    """
    n = len(pts)
    best = [[0] * n for _ in range(allow_low + 1)]
    prev = [[None] * n for _ in range(allow_low + 1)]
    pre = [[(0, None)] for _ in range(allow_low + 1)]  # prefix max over pts[:i]
    ptr = 0
    for j in range(n):
        while ptr < j and pts[ptr] <= pts[j] - x:
            ptr += 1
        for u in range(allow_low + 1):
            need = u - (0 if high[j] else 1)
            if need < 0:
                continue
            length, arg = pre[need][ptr]
            best[u][j] = length + 1
            prev[u][j] = (need, arg) if arg is not None else None
        for u in range(allow_low + 1):
            cur = pre[u][-1]
            pre[u].append((best[u][j], j) if best[u][j] > cur[0] else cur)
    results = []
    for u in range(allow_low + 1):
        length, arg = pre[u][-1]
        chain = []
        state = (u, arg) if arg is not None else None
        while state is not None:
            uu, jj = state
            chain.append(jj)
            state = prev[uu][jj]
        results.append(chain[::-1])
    return results


def witness_points(inst: Instance) -> Optional[WitnessSet]:
    """Search for ``k + 1`` points spaced by the bound's length.

    At most one point may be low priority. Candidates are lid endpoints of
    the four shifted optimal covers, endpoints of H with 0 and 1, and
    multiples of the spacing measured from those endpoints. Returns None
    (and logs the reason) when no chain is found.
    """
    p = inst.priorities
    k = inst.robots
    if not p:
        log.info("no witness: priority set is empty")
        return None
    report = lower_bound(inst)
    x = min(report.lambda_prev, report.Lambda_double)
    pts = _candidate_pool(inst, x, report)
    high = [p.contains(v) for v in pts]
    chains = _longest_chain(pts, high, x, allow_low=1)
    for chain in reversed(chains):  # prefer a chain using one low point
        if len(chain) < k + 1:
            continue
        chosen = [pts[j] for j in chain]
        lows = [v for v in chosen if not p.contains(v)]
        highs = [v for v in chosen if p.contains(v)]
        keep = sorted(lows + highs[: k + 1 - len(lows)])
        ws = WitnessSet(tuple(keep), x, sum(1 for v in keep if p.contains(v)))
        if not ws.violations(p, k):
            return ws
    log.info("no witness: no chain of %d points with spacing %s", k + 1, x)
    return None
