"""Priority boundary patrolling on [0, 1]: lid covers, bounds, strategies."""

from .core import INFINITY, Instance, InstanceError, Interval, Lid, PrioritySet, rat
from .covers import Kind, LidCover, Shift, double_cover_feasible, single_cover_feasible
from .optimize import OptResult, min_double_lid_length, min_single_lid_length
from .bounds import BoundReport, WitnessSet, lower_bound, witness_points
from .strategies import StrategyPlan, Trajectory, best_strategy, strategy_one, strategy_three, strategy_two
from .simulate import IdleReport, measured_idle, sample_points

__version__ = "0.1.0"
