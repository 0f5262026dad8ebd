"""Empirical idle times of strategy plans, plus trajectory sanity checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .core import PrioritySet
from .strategies import StrategyPlan, Trajectory

TOL = 1e-9


@dataclass(frozen=True)
class PointIdle:
    point: float
    idle: float
    visit_count: int
    censored: bool = False  # no visits at all: idle is the window length
    edge_gap: float = 0.0   # longest gap cut by a window edge (not counted)


@dataclass(frozen=True)
class IdleReport:
    max_idle: float
    argmax_point: Optional[float]
    per_point: tuple[PointIdle, ...]
    window: tuple[float, float]
    samples: int


def sample_points(p: PrioritySet, n_samples: int) -> list[Fraction]:
    """Segment endpoints plus dyadic interior samples of every segment.

    ``n_samples`` is split across segments by length (every segment gets at
    least one interval). Each segment is cut into a power-of-two number of
    pieces, so doubling ``n_samples`` only ever adds points.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    pts = set()
    total = sum((s.length for s in p), Fraction(0))
    for s in p:
        pts.update((s.left, s.right))
        if s.length == 0:
            continue
        share = n_samples * s.length / total if total else n_samples
        pieces = 1
        while 2 * pieces + 1 <= share:
            pieces *= 2
        for j in range(1, pieces):
            pts.add(s.left + s.length * j / pieces)
    return sorted(pts)


def _pieces(trajs: Sequence[Trajectory]):
    t0, t1, x0, x1 = [], [], [], []
    for tr in trajs:
        for (ta, xa), (tb, xb) in zip(tr.breakpoints, tr.breakpoints[1:]):
            t0.append(float(ta)); t1.append(float(tb))
            x0.append(float(xa)); x1.append(float(xb))
    return tuple(np.array(v, dtype=float) for v in (t0, t1, x0, x1))


def visit_times(traj: Trajectory, x, window) -> list[tuple[Fraction, Fraction]]:
    """Exact visits of ``x`` as ``(start, end)`` pairs; crossings have start == end."""
    lo_w, hi_w = Fraction(window[0]), Fraction(window[1])
    x = Fraction(x)
    out: list[tuple[Fraction, Fraction]] = []
    for (ta, xa), (tb, xb) in zip(traj.breakpoints, traj.breakpoints[1:]):
        if xa == xb:
            if xa != x:
                continue
            s, e = ta, tb
        else:
            if not min(xa, xb) <= x <= max(xa, xb):
                continue
            s = e = ta + (x - xa) * (tb - ta) / (xb - xa)
        s, e = max(s, lo_w), min(e, hi_w)
        if s > e:
            continue
        if out and out[-1][1] >= s:
            out[-1] = (out[-1][0], max(out[-1][1], e))
        else:
            out.append((s, e))
    return out


def _visit_intervals(pieces, xs: np.ndarray, tol: float):
    """Per point, an (n, 2) array of visit intervals (unsorted)."""
    t0, t1, x0, x1 = pieces
    X = xs[:, None]
    lo = np.minimum(x0, x1)[None, :]
    hi = np.maximum(x0, x1)[None, :]
    hit = (X >= lo - tol) & (X <= hi + tol)
    dx = (x1 - x0)[None, :]
    moving = np.abs(dx) > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(moving, (X - x0[None, :]) / np.where(moving, dx, 1.0), 0.0)
    frac = np.clip(frac, 0.0, 1.0)
    start = np.where(moving, t0 + frac * (t1 - t0), t0)
    end = np.where(moving, start, t1)
    out = []
    for i in range(len(xs)):
        idx = np.nonzero(hit[i])[0]
        out.append(np.stack([start[i, idx], end[i, idx]], axis=1))
    return out


def _gaps(iv: np.ndarray, w0: float, w1: float, period: Optional[float]):
    """Interior max gap, edge gap and number of merged visits."""
    iv = iv[(iv[:, 1] >= w0 - TOL) & (iv[:, 0] <= w1 + TOL)]
    if len(iv) == 0:
        return None
    iv = np.clip(iv[np.argsort(iv[:, 0], kind="stable")], w0, w1)
    reach = np.maximum.accumulate(iv[:, 1])
    gaps = iv[1:, 0] - reach[:-1]
    inner = float(gaps.max()) if len(gaps) else 0.0
    inner = max(inner, 0.0)
    count = 1 + int(np.count_nonzero(gaps > TOL))
    head, tail = float(iv[0, 0]) - w0, w1 - float(reach[-1])
    edge = max(head, tail)
    if period:
        reps = (w1 - w0) / period
        if reps >= 1 and abs(reps - round(reps)) < 1e-9:
            # periodic extension: the tail gap continues into the head gap
            inner = max(inner, head + tail)
            edge = 0.0
    return inner, edge, count


def measured_idle(plan: StrategyPlan, points, window, tol: float = TOL) -> IdleReport:
    """Largest gap between consecutive visits over the sampled points.

    Gaps cut by the window edges are recorded as ``edge_gap`` and excluded,
    unless the plan's period divides the window, in which case the wrapped
    gap counts. Points never visited are flagged ``censored`` and take the
    whole window length as idle time.
    """
    w0, w1 = float(window[0]), float(window[1])
    points = list(points)
    if not points:
        return IdleReport(0.0, None, (), (w0, w1), 0)
    xs = np.array([float(x) for x in points], dtype=float)
    pieces = _pieces(plan.trajectories)
    period = float(plan.period) if plan.period else None
    if len(pieces[0]) == 0:
        visits = [np.zeros((0, 2)) for _ in xs]
    else:
        visits = _visit_intervals(pieces, xs, tol)
    rows = []
    for x, iv in zip(xs, visits):
        g = _gaps(iv, w0, w1, period)
        if g is None:
            rows.append(PointIdle(float(x), w1 - w0, 0, True, w1 - w0))
        else:
            inner, edge, count = g
            rows.append(PointIdle(float(x), float(inner), count, False, float(edge)))
    best = max(rows, key=lambda r: r.idle)
    return IdleReport(best.idle, best.point, tuple(rows), (w0, w1), len(rows))


def validate_trajectory(traj: Trajectory, tol: float = TOL) -> list[str]:
    out = []
    bps = traj.breakpoints
    for t, x in bps:
        if x < -tol or x > 1 + tol:
            out.append(f"position {float(x):.12g} at time {float(t):.12g} outside [0, 1]")
        if t < 0:
            out.append(f"negative time {float(t):.12g}")
    for (ta, xa), (tb, xb) in zip(bps, bps[1:]):
        if tb <= ta:
            out.append(f"times not increasing at {float(ta):.12g}")
        elif abs(xb - xa) > (tb - ta) * (1 + tol) + tol:
            speed = abs(xb - xa) / (tb - ta)
            out.append(f"speed {float(speed):.12g} > 1 between times {float(ta):.12g} and {float(tb):.12g}")
    return out


def coverage_check(plan: StrategyPlan, n_samples: int, window) -> list[float]:
    """Sampled low-priority points that no robot visits inside ``window``."""
    p = plan.instance.priorities
    grid = [Fraction(i, n_samples) for i in range(n_samples + 1)] if n_samples else []
    low = [x for x in grid if not p.contains(x)]
    if not low:
        return []
    report = measured_idle(plan, low, window)
    return [r.point for r in report.per_point if r.visit_count == 0]
