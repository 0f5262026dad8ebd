from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from conftest import instances, priority_sets
from patrol.core import Instance, PrioritySet
from patrol.simulate import (
    coverage_check,
    measured_idle,
    sample_points,
    validate_trajectory,
    visit_times,
)
from patrol.strategies import StrategyPlan, Trajectory, strategy_one, strategy_three, strategy_two


def ps(*pairs):
    return PrioritySet.from_pairs(pairs)


def oscillator(a, b, horizon, start=0):
    a, b = F(a), F(b)
    bps, t, x = [(F(start), a)], F(start), a
    while t < horizon:
        t += b - a
        x = b if x == a else a
        bps.append((t, x))
    return Trajectory(bps, 2 * (b - a))


def plan_of(p, *trajs, period=None):
    return StrategyPlan(Instance(p, len(trajs)), tuple(trajs), None, None, period=period)


class TestSamplePoints:
    def test_examples(self):
        assert sample_points(ps(("0.4", "0.6")), 3) == [F(2, 5), F(1, 2), F(3, 5)]
        assert sample_points(ps(), 10) == []
        assert sample_points(ps((0, 1)), 5) == [0, F(1, 4), F(1, 2), F(3, 4), 1]

    def test_keeps_endpoints_and_points(self):
        p = ps(("0.1", "0.2"), ("0.5", "0.5"))
        pts = sample_points(p, 64)
        assert {F(1, 10), F(1, 5), F(1, 2)} <= set(pts) and pts == sorted(set(pts))

    @given(priority_sets(), st.integers(1, 300))
    def test_doubling_refines(self, p, n):
        assert set(sample_points(p, n)) <= set(sample_points(p, 2 * n))

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            sample_points(ps(), 0)


class TestVisitTimes:
    def test_crossings(self):
        tr = oscillator(0, 1, 4)
        assert visit_times(tr, F(1, 2), (0, 4)) == [(t, t) for t in (F(1, 2), F(3, 2), F(5, 2), F(7, 2))]

    def test_turning_points(self):
        tr = oscillator(0, 1, 4)
        assert visit_times(tr, 0, (0, 4)) == [(0, 0), (2, 2), (4, 4)]

    def test_dwell(self):
        tr = Trajectory([(0, F(1, 10)), (1, F(3, 10)), (2, F(3, 10)), (3, F(1, 2))])
        assert visit_times(tr, F(3, 10), (0, 3)) == [(1, 2)]


class TestMeasuredIdle:
    def test_strategy_one_two_robots(self):
        plan = strategy_one(Instance.build([("0.4", "0.6")], 2))
        rep = measured_idle(plan, sample_points(plan.instance.priorities, 512), (0, plan.horizon))
        assert rep.max_idle == pytest.approx(0.4, abs=1e-9)

    def test_sweeper_endpoint(self):
        p = ps((0, 0))
        rep = measured_idle(plan_of(p, oscillator(0, 1, 8)), [F(0)], (0, 8))
        assert rep.max_idle == pytest.approx(2.0)
        assert rep.per_point[0].visit_count == 5

    def test_empty_points(self):
        rep = measured_idle(plan_of(ps(), oscillator(0, 1, 2)), [], (0, 2))
        assert rep.max_idle == 0 and rep.per_point == ()

    def test_unvisited_point_is_flagged(self):
        rep = measured_idle(plan_of(ps((0, 1)), oscillator(0, "0.5", 4)), [F(3, 4)], (0, 4))
        row = rep.per_point[0]
        assert row.visit_count == 0 and row.censored and row.idle == 4

    def test_edge_gaps_are_censored(self):
        # visits at 0.5, 1.5, 2.5; the window edges cut the first and last gaps
        rep = measured_idle(plan_of(ps((0, 1)), oscillator(0, 1, 3)), [F(1, 2)], (0, 3))
        assert rep.max_idle == pytest.approx(1.0)
        assert rep.per_point[0].edge_gap == pytest.approx(0.5)

    def test_periodic_extension(self):
        # x = 0.1 is visited at 0.1 and 1.9 in each period; the wrapped gap is 0.2
        tr = oscillator(0, 1, 4)
        rep = measured_idle(plan_of(ps((0, 1)), tr, period=F(2)), [F(1, 10)], (0, 4))
        assert rep.max_idle == pytest.approx(1.8)
        rep = measured_idle(plan_of(ps((0, 1)), tr, period=F(2)), [F(9, 10)], (0, 4))
        assert rep.max_idle == pytest.approx(1.8)

    def test_two_robot_proposed_strategy(self):
        # r1 on [0, beta], r2 on [alpha, 1] with alpha = (1 - a) / 2
        for a, b in [(F(1, 5), F(3, 10)), (F(1, 10), F(1, 2)), (F(3, 10), F(2, 5))]:
            alpha = (1 - a) / 2
            p = ps((a, b))
            plan = plan_of(p, oscillator(0, 1 - alpha, 20), oscillator(alpha, 1, 20))
            rep = measured_idle(plan, sample_points(p, 512), (4, 20))
            assert rep.max_idle == pytest.approx(float(1 - a), abs=1e-9)

    def test_deterministic(self):
        plan = strategy_three(Instance.build([("0.1", "0.3"), ("0.6", "0.65")], 3))
        pts = sample_points(plan.instance.priorities, 128)
        assert measured_idle(plan, pts, (plan.warmup, plan.horizon)) == measured_idle(
            plan, pts, (plan.warmup, plan.horizon))

    @settings(max_examples=20, deadline=None)
    @given(instances(robots=st.integers(2, 3), allow_empty=False), st.integers(2, 64))
    def test_refinement_never_decreases(self, i, n):
        plan = strategy_two(i)
        w = (0, plan.horizon)
        coarse = measured_idle(plan, sample_points(i.priorities, n), w).max_idle
        fine = measured_idle(plan, sample_points(i.priorities, 2 * n), w).max_idle
        assert fine >= coarse - 1e-12

    @settings(max_examples=15, deadline=None)
    @given(instances(robots=st.integers(2, 3), allow_empty=False), st.integers(0, 7))
    def test_period_shift_invariance(self, i, shift):
        plan = strategy_two(i, horizon=None)
        T = plan.period
        t0 = T * shift / 8
        pts = sample_points(i.priorities, 64)
        base = measured_idle(plan, pts, (0, 2 * T)).max_idle
        moved = measured_idle(plan, pts, (t0, t0 + 2 * T)).max_idle
        assert moved == pytest.approx(base, abs=1e-9)


class TestValidate:
    def test_ok(self):
        assert validate_trajectory(Trajectory([(0, 0), (1, 1)])) == []

    def test_speed(self):
        (msg,) = validate_trajectory(Trajectory([(0, 0), (F(1, 2), 1)]))
        assert "speed 2" in msg

    def test_range(self):
        (msg,) = validate_trajectory(Trajectory([(0, 0), (1, F(-1, 10))]))
        assert "outside" in msg

    def test_time_order(self):
        assert validate_trajectory(Trajectory([(0, 0), (0, 0)]))


class TestCoverage:
    def test_strategy_one_sweeps(self):
        plan = strategy_one(Instance.build([("0.4", "0.6")], 2))
        assert coverage_check(plan, 200, (0, plan.horizon)) == []

    @settings(max_examples=20, deadline=None)
    @given(instances(robots=st.integers(1, 4)))
    def test_strategy_two_covers_everything(self, i):
        plan = strategy_two(i)
        assert coverage_check(plan, 200, (0, plan.horizon)) == []

    def test_stationary_robot(self):
        p = ps(("0.4", "0.6"))
        plan = plan_of(p, Trajectory([(0, F(1, 2)), (10, F(1, 2))]))
        missed = coverage_check(plan, 10, (0, 10))
        assert len(missed) == 8  # 11 grid points minus 0.4, 0.5, 0.6
