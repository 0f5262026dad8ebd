"""The three patrolling strategies as explicit piecewise-linear trajectories."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import INFINITY, Instance, InstanceError
from .bounds import solve_lengths
from .covers import LidCover


class Source(str, enum.Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"


@dataclass(frozen=True)
class Trajectory:
    breakpoints: tuple[tuple[Fraction, Fraction], ...]
    period: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(self.breakpoints))

    @property
    def start(self):
        return self.breakpoints[0][0]

    @property
    def end(self):
        return self.breakpoints[-1][0]

    def position(self, t):
        """Position at time ``t`` inside the breakpoint range."""
        bps = self.breakpoints
        if t < bps[0][0] or t > bps[-1][0]:
            raise ValueError(f"time {t} outside [{bps[0][0]}, {bps[-1][0]}]")
        lo, hi = 0, len(bps) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if bps[mid][0] <= t:
                lo = mid
            else:
                hi = mid
        (t0, x0), (t1, x1) = bps[lo], bps[min(hi, len(bps) - 1)]
        if t1 == t0:
            return x0
        return x0 + (x1 - x0) * (t - t0) / (t1 - t0)


@dataclass(frozen=True)
class StrategyPlan:
    instance: Instance
    trajectories: tuple[Trajectory, ...]
    claimed_idle: Fraction
    source: Optional[Source]
    length: Optional[Fraction] = None  # lambda_{k-1} or Lambda_{2k}
    cover: Optional[LidCover] = None
    horizon: Optional[Fraction] = None
    warmup: Fraction = Fraction(0)
    period: Optional[Fraction] = None


def _append(bps: list, t, x):
    if bps and bps[-1][0] == t:
        if bps[-1][1] != x:
            raise AssertionError(f"jump at time {t}: {bps[-1][1]} -> {x}")
        return
    bps.append((Fraction(t), Fraction(x)))


def _oscillate(a, b, t_start, t_end, at_left=True) -> list:
    """Back-and-forth on [a, b] from ``t_start`` to ``t_end``."""
    bps: list = []
    if a == b:
        _append(bps, t_start, a)
        _append(bps, t_end, a)
        return bps
    half = b - a
    t, pos = t_start, (a if at_left else b)
    _append(bps, t, pos)
    while t + half <= t_end:
        t += half
        pos = b if pos == a else a
        _append(bps, t, pos)
    if t < t_end:
        step = t_end - t
        _append(bps, t_end, pos + step if pos == a else pos - step)
    return bps


def _clip(lo, hi):
    return max(Fraction(0), lo), min(Fraction(1), hi)


def _period_lcm(values) -> Optional[Fraction]:
    """Least common multiple of positive rationals (None if all zero)."""
    vals = [Fraction(v) for v in values if v]
    if not vals:
        return None
    num, den = vals[0].numerator, vals[0].denominator
    for v in vals[1:]:
        num = num * v.numerator // math.gcd(num, v.numerator)
        den = math.gcd(den, v.denominator)
    return Fraction(num, den)


_HORIZON_CAP = Fraction(400)


def _default_horizon(*periods, plan_period=None) -> Fraction:
    """Three of the longest robot periods, stretched to two plan periods when affordable."""
    h = Fraction(3) * max([Fraction(2)] + [Fraction(p) for p in periods if p])
    if plan_period and 2 * plan_period <= _HORIZON_CAP:
        h = max(h, 2 * plan_period)
    return h


def strategy_one(inst: Instance, horizon=None) -> StrategyPlan:
    """k - 1 robots oscillate on the lids of an optimal single cover, one sweeps [0, 1]."""
    k = inst.robots
    single, _ = solve_lengths(inst)
    if single.length == INFINITY:
        raise InstanceError("strategy 1 needs lambda_0 finite: one robot cannot single-cover a nonempty H")
    lam = single.length
    spans = [_clip(lid.left, lid.right) for lid in single.cover.lids]
    periods = [Fraction(2)] + [2 * (b - a) for a, b in spans if b > a]
    plan_period = _period_lcm(periods)
    if horizon is None:
        horizon = _default_horizon(2 * lam, plan_period=plan_period)
    horizon = Fraction(horizon)
    trajs = []
    for a, b in spans:
        trajs.append(Trajectory(_oscillate(a, b, 0, horizon), 2 * (b - a) if b > a else None))
    trajs.append(Trajectory(_oscillate(Fraction(0), Fraction(1), 0, horizon), Fraction(2)))
    claimed = 2 * lam if inst.priorities else Fraction(0)
    return StrategyPlan(inst, tuple(trajs), claimed, Source.S1, lam, single.cover, horizon,
                        period=plan_period)


def _clamped(bps: list, t0, v0, t1, v1):
    """Breakpoints of clamp(v, 0, 1) for v linear from (t0, v0) to (t1, v1)."""
    cuts = [Fraction(t0)]
    for bound in (0, 1):
        if (v0 - bound) * (v1 - bound) < 0:
            cuts.append(t0 + (bound - v0) * (t1 - t0) / (v1 - v0))
    cuts.append(Fraction(t1))
    for t in sorted(cuts):
        v = v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        _append(bps, t, min(Fraction(1), max(Fraction(0), v)))


def strategy_two(inst: Instance, horizon=None) -> StrategyPlan:
    """Synchronized robots on segments of the widest cap's width, centred on each cap."""
    _, double = solve_lengths(inst)
    Lam = double.length
    lids = double.cover.lids
    caps = []
    for i in range(0, len(lids), 2):
        a, b = lids[i], lids[i + 1]
        caps.append(_clip(a.left, max(a.right, b.right)))
    width = max(hi - lo for lo, hi in caps)
    period = 2 * width
    horizon = Fraction(horizon) if horizon is not None else _default_horizon(period, plan_period=period)
    trajs = []
    for lo, hi in caps:
        centre = (lo + hi) / 2
        v_lo, v_hi = centre - width / 2, centre + width / 2
        bps: list = []
        t, going_right = Fraction(0), True
        while t < horizon:
            t1 = min(t + width, horizon)
            frac = (t1 - t) / width
            if going_right:
                _clamped(bps, t, v_lo, t1, v_lo + frac * width)
            else:
                _clamped(bps, t, v_hi, t1, v_hi - frac * width)
            t, going_right = t1, not going_right
        trajs.append(Trajectory(bps, period))
    return StrategyPlan(inst, tuple(trajs), 3 * Lam, Source.S2, Lam, double.cover, horizon,
                        period=period)


_MAX_CYCLES = 200


class _Osc:
    """A robot bouncing on [a, b], at ``start`` (a or b) at time ``t_ref``."""

    def __init__(self, a, b, t_ref, at_left):
        self.a, self.b, self.t_ref, self.at_left = a, b, t_ref, at_left

    def next_turn(self, t, at_left: bool):
        """First time >= t at which the robot is at the chosen end."""
        half = self.b - self.a
        if half == 0:
            return max(t, self.t_ref)
        offset = Fraction(0) if at_left == self.at_left else half
        base = self.t_ref + offset
        if t <= base:
            return base
        cycles = math.ceil((t - base) / (2 * half))
        return base + cycles * 2 * half

    def phase(self, t):
        half = self.b - self.a
        return (t - self.t_ref) % (2 * half) if half else Fraction(0)


def _s3_events(odd, even, t0, horizon, until_first_cycle=False, until_period=0):
    """Run the cascade.

    Returns per-robot breakpoints, the final oscillation states, the end of
    the first cycle, the period (or None) and the time the periodic regime
    was first entered. ``until_period`` caps the number of cycles to run
    while looking for a recurrence instead of stopping at ``horizon``.
    """
    k = len(odd)
    osc = [_Osc(a, b, Fraction(0), True) for a, b in odd]
    bps = [[] for _ in range(k)]
    seen = {}
    period = None
    cycle_start = Fraction(t0)
    first_cycle_end = None
    periodic_from = None
    cycles = 0

    def advance(i, until):
        o = osc[i]
        start_left = o.at_left
        for t, x in _oscillate(o.a, o.b, o.t_ref, until, start_left):
            _append(bps[i], t, x)

    while True:
        state = tuple(osc[i].phase(cycle_start) for i in range(k))
        if state in seen and period is None:
            period = cycle_start - seen[state]
            periodic_from = seen[state]
        seen.setdefault(state, cycle_start)
        if first_cycle_end is not None:
            if until_first_cycle:
                break
            if until_period:
                if period is not None or cycles >= until_period:
                    break
            elif cycle_start >= horizon:
                break
        cycles += 1
        prev = cycle_start
        for i in range(k):  # odd -> even, left to right
            s = osc[i].next_turn(prev, at_left=True)
            advance(i, s)
            (oa, _), (_, eb) = odd[i], even[i]
            arrive = s + (eb - oa)
            _append(bps[i], arrive, eb)
            osc[i] = _Osc(even[i][0], eb, arrive, False)
            prev = arrive
        for i in reversed(range(k)):  # even -> odd, right to left
            s = osc[i].next_turn(prev, at_left=False)
            advance(i, s)
            (oa, _), (_, eb) = odd[i], even[i]
            arrive = s + (eb - oa)
            _append(bps[i], arrive, oa)
            osc[i] = _Osc(oa, odd[i][1], arrive, True)
            prev = arrive
        if first_cycle_end is None:
            first_cycle_end = prev
        cycle_start = prev
    return bps, osc, first_cycle_end, period, periodic_from


def _truncate(bps: list, horizon) -> list:
    out = []
    for (t0, x0), (t1, x1) in zip(bps, bps[1:]):
        if t0 >= horizon:
            break
        _append(out, t0, x0)
        if t1 >= horizon:
            _append(out, horizon, x0 + (x1 - x0) * (horizon - t0) / (t1 - t0))
            return out
        _append(out, t1, x1)
    if bps and (not out or out[-1][0] < bps[-1][0] <= horizon):
        _append(out, *bps[-1])
    return out


def strategy_three(inst: Instance, horizon=None) -> StrategyPlan:
    """Odd-lid oscillation with a left-to-right then right-to-left switching cascade.

    Every robot starts at the left end of its odd lid moving right. The
    warm-up ends at the longest odd lid length, when every odd lid has been
    swept once. The cascade then starts: robot i leaves for the right end of
    its even lid at its first left turn after robot i - 1 reached the right
    end of its own even lid; the reverse pass mirrors this.
    """
    _, double = solve_lengths(inst)
    Lam = double.length
    lids = double.cover.lids
    odd = [_clip(lids[2 * i].left, lids[2 * i].right) for i in range(inst.robots)]
    even = [_clip(lids[2 * i + 1].left, lids[2 * i + 1].right) for i in range(inst.robots)]
    t0 = max(b - a for a, b in odd)
    _, _, first_end, _, _ = _s3_events(odd, even, t0, Fraction(0), until_first_cycle=True)
    if horizon is None:
        # long enough for two full periods once the cascade repeats
        _, _, _, period, since = _s3_events(odd, even, t0, Fraction(0), until_period=_MAX_CYCLES)
        horizon = max(first_end * 4, t0 + 8 * Lam)
        if period is not None:
            horizon = max(horizon, since + 2 * period)
    horizon = Fraction(horizon)
    if horizon < first_end:
        raise ValueError(f"horizon {horizon} too short: strategy 3 needs at least {first_end}")
    bps, osc, _, period, _ = _s3_events(odd, even, t0, horizon)
    trajs = []
    for i in range(inst.robots):
        o = osc[i]
        tail = list(bps[i])
        last_t = tail[-1][0] if tail else Fraction(0)
        if last_t < horizon:
            for t, x in _oscillate(o.a, o.b, o.t_ref, horizon, o.at_left):
                _append(tail, t, x)
        trajs.append(Trajectory(_truncate(tail, horizon), period))
    return StrategyPlan(inst, tuple(trajs), 2 * Lam, Source.S3, Lam, double.cover, horizon,
                        warmup=t0, period=period)


def best_strategy(inst: Instance, horizon=None) -> StrategyPlan:
    """Strategy 1 when lambda_{k-1} <= Lambda_{2k}, otherwise strategy 3."""
    single, double = solve_lengths(inst)
    if single.length <= double.length:
        return strategy_one(inst, horizon)
    return strategy_three(inst, horizon)
