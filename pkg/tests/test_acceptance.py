"""Acceptance suite: one PASS/FAIL line per criterion (see the summary at the end of the run).

Pinned tolerances: exact rational equality for criteria 1, 2, 5 and 7;
1e-6 for claimed idle bounds and 1e-3 for the best-strategy gap in criteria 3
and 4; wall-clock limits as stated per criterion.
"""

import math
import random
import time
from fractions import Fraction as F

import pytest

from conftest import record
from patrol.bounds import lower_bound
from patrol.core import Instance, Interval, PrioritySet, total_measure
from patrol.covers import (
    Kind,
    build_left_shifted_double,
    build_right_shifted_double,
    component_partition,
    critical_blocks,
    double_cover_feasible,
    left_shift_violations,
    lid_meets_priority,
    single_cover_feasible,
)
from patrol.optimize import brute_force_min_length, min_double_lid_length, min_single_lid_length
from patrol.simulate import measured_idle, sample_points
from patrol.strategies import best_strategy, strategy_one, strategy_three, strategy_two

BOUND_TOL = 1e-6
BEST_TOL = 1e-3
SAMPLES = 2048  # yields >= 512 interior samples per instance plus all endpoints


def random_set(rng, max_segments=4, max_den=40, allow_empty=True):
    n = rng.randint(0 if allow_empty else 1, max_segments)
    d = rng.randint(2, max_den)
    k = min(2 * n, d + 1)
    pts = sorted(rng.sample(range(d + 1), k))
    return PrioritySet.from_pairs(
        [(F(pts[i], d), F(pts[i + 1], d)) for i in range(0, len(pts) - 1, 2)])


def test_criterion_1_two_robot_closed_form():
    start = time.perf_counter()
    checked, bad = 0, []
    grid = [F(i, 21) for i in range(1, 21)]
    for a in grid:
        for b in grid:
            if not (a < b and a <= 1 - b):
                continue
            inst = Instance.build([(a, b)], 2)
            want = min(2 * (b - a), 1 - a)
            got = lower_bound(inst).lower_bound
            claimed = best_strategy(inst).claimed_idle
            checked += 1
            if got != want or claimed != want:
                bad.append((a, b, got, claimed, want))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5
    record(1, ok, f"{checked} grid instances, {len(bad)} mismatches, {elapsed:.2f}s (limit 5s)")
    assert not bad, bad[:5]
    assert elapsed < 5


def test_criterion_2_oracle_equivalence():
    rng = random.Random(2)
    start = time.perf_counter()
    bad = []
    for _ in range(200):
        p = random_set(rng)
        m = rng.randint(1, 6)
        single = min_single_lid_length(p, m).length
        double = min_double_lid_length(p, m).length
        if single != brute_force_min_length(p, m, Kind.SINGLE):
            bad.append(("single", p, m))
        if double != brute_force_min_length(p, m, Kind.STRONG_DOUBLE):
            bad.append(("double", p, m))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    record(2, ok, f"200 instances, {len(bad)} mismatches, {elapsed:.2f}s (limit 60s)")
    assert not bad, bad[:5]
    assert elapsed < 60


@pytest.fixture(scope="module")
def strategy_runs():
    """Measured idle of S1, S2, S3 and the best plan on 50 random instances."""
    rng = random.Random(3)
    runs = []
    for _ in range(50):
        inst = Instance(random_set(rng, allow_empty=False), rng.choice([2, 3, 4]))
        pts = sample_points(inst.priorities, SAMPLES)
        bound = lower_bound(inst).lower_bound
        row = {"inst": inst, "bound": float(bound), "samples": len(pts)}
        for name, fn in (("S1", strategy_one), ("S2", strategy_two), ("S3", strategy_three)):
            plan = fn(inst)
            window = (plan.warmup, plan.horizon)
            if plan.period is not None:
                assert plan.horizon - plan.warmup >= 2 * plan.period or name == "S1"
            row[name] = (measured_idle(plan, pts, window).max_idle, float(plan.claimed_idle))
        best = best_strategy(inst)
        row["best"] = measured_idle(best, pts, (best.warmup, best.horizon)).max_idle
        runs.append(row)
    return runs


def test_criterion_3_strategy_soundness(strategy_runs):
    bad = []
    for row in strategy_runs:
        for name in ("S1", "S2", "S3"):
            measured, claimed = row[name]
            if measured > claimed + BOUND_TOL:
                bad.append((name, row["inst"], measured, claimed))
    worst = max(row[n][0] - row[n][1] for row in strategy_runs for n in ("S1", "S2", "S3"))
    fewest = min(row["samples"] for row in strategy_runs)
    record(3, not bad, f"50 instances x 3 strategies, {len(bad)} above claim, "
                       f"max(measured - claimed) = {worst:.2e}, >= {fewest} sample points")
    assert fewest >= 512
    assert not bad, bad[:3]


def test_criterion_4_tightness_sandwich(strategy_runs):
    below, loose = [], []
    for row in strategy_runs:
        for name in ("S1", "S2", "S3"):
            if row["bound"] > row[name][0] + BOUND_TOL:
                below.append((name, row["inst"], row[name][0], row["bound"]))
        if row["best"] > row["bound"] + BEST_TOL:
            loose.append((row["inst"], row["best"], row["bound"]))
    gap = max(row["best"] - row["bound"] for row in strategy_runs)
    ok = not below and not loose
    record(4, ok, f"{len(below)} strategies below the bound, {len(loose)} best plans above it, "
                  f"max(best - bound) = {gap:.2e}")
    assert not below, below[:3]
    assert not loose, loose[:3]


def test_criterion_5_structural_properties():
    rng = random.Random(5)
    counts = {"domination": 0, "left-shift": 0, "critical": 0, "even": 0, "meets": 0}
    binding_cases = 0
    done = 0
    while done < 200:
        p = random_set(rng)
        m = rng.randint(2, 6)
        opt = min_double_lid_length(p, m)
        l = opt.length + F(rng.randint(0, 6), 40)
        if double_cover_feasible(p, m, l) is None:
            continue
        done += 1
        left = build_left_shifted_double(p, m, l)
        right = build_right_shifted_double(p, m, l)
        if any(a.left < b.left for a, b in zip(left.lids, right.lids)):
            counts["domination"] += 1
        if left_shift_violations(left, p):
            counts["left-shift"] += 1
        if not critical_blocks(opt.cover, p, star=True):
            counts["critical"] += 1
        if p and not critical_blocks(min_single_lid_length(p, m).cover, p):
            counts["critical"] += 1
        k = rng.randint(1, 3)
        lam = min_single_lid_length(p, k - 1).length
        dbl = min_double_lid_length(p, 2 * k)
        if dbl.length < lam:
            binding_cases += 1
            if any(s % 2 for s in component_partition(dbl.cover, p).sizes):
                counts["even"] += 1
            if not all(lid_meets_priority(lid, p) for lid in dbl.cover.lids):
                counts["meets"] += 1
    ok = not any(counts.values())
    record(5, ok, f"200 feasible (P, m, l), failures {counts}, "
                  f"{binding_cases} cases with Lambda_2k < lambda_k-1")
    assert ok, counts


def _big_set(n, den, seed):
    rng = random.Random(seed)
    pts = sorted(rng.sample(range(1, den), 2 * n))
    return PrioritySet(tuple(Interval(F(pts[2 * i], den), F(pts[2 * i + 1], den)) for i in range(n)))


def test_criterion_6_complexity():
    p = _big_set(100_000, 10**7, 6)
    m = 100_000
    p.scaled  # instance preprocessing, shared by every probe
    t = time.perf_counter()
    double_cover_feasible(p, m, F(3, 2 * m))
    single_cover_feasible(p, m, F(1, m))
    feas = (time.perf_counter() - t) / 2

    q = _big_set(10_000, 10**6, 7)
    k = 1000
    t = time.perf_counter()
    res = min_double_lid_length(q, 2 * k)
    opt = time.perf_counter() - t
    limit = 4 * math.log2(len(q) ** 2 * 2 * k) + 8
    ok = feas < 1 and opt < 10 and res.probes <= limit
    record(6, ok, f"feasibility n=m=1e5 {feas:.3f}s (limit 1s); optimizer n=1e4 k=1e3 "
                  f"{opt:.2f}s (limit 10s), {res.probes} probes (limit {limit:.1f})")
    assert feas < 1 and opt < 10 and res.probes <= limit


def test_criterion_7_measure_bounds():
    rng = random.Random(7)
    bad = []
    for _ in range(200):
        p = random_set(rng)
        mu = total_measure(p)
        m = rng.randint(1, 8)
        if min_double_lid_length(p, m).length < (1 + mu) / m:
            bad.append(("double measure", p, m))
        if min_single_lid_length(p, m).length < mu / m:
            bad.append(("single measure", p, m))
        k = rng.randint(1, 4)
        Lam = min_double_lid_length(p, 2 * k).length
        if not F(1, 2 * k) <= Lam <= F(1, k):
            bad.append(("window", p, k))
    record(7, not bad, f"200 instances, {len(bad)} violations of the measure bounds and window")
    assert not bad, bad[:5]
