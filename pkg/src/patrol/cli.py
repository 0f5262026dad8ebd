"""``patrol`` command-line interface.

Exit codes: 0 success, 2 parse error, 3 infeasible or failed precondition,
4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from collections import defaultdict
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .bounds import lower_bound
from .core import INFINITY, Instance, InstanceError, Interval, PrioritySet, fmt, rat
from .covers import InfeasibleError, double_cover_feasible, single_cover_feasible
from .simulate import measured_idle, sample_points, validate_trajectory
from .strategies import (
    StrategyPlan,
    Trajectory,
    best_strategy,
    strategy_one,
    strategy_three,
    strategy_two,
)

EXIT_OK, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_INVARIANT = 0, 2, 3, 4


class ParseError(ValueError):
    pass


def _line_of(text: str, needle: str) -> Optional[int]:
    pos = text.find(needle)
    return text.count("\n", 0, pos) + 1 if pos >= 0 else None


def parse_instance_text(text: str, strict: bool = False, source: str = "<input>") -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object with 'segments' and 'robots'")
    for key in ("segments", "robots"):
        if key not in data:
            raise ParseError(f"{source}: missing key {key!r}")
    robots = data["robots"]
    if not isinstance(robots, int) or isinstance(robots, bool) or robots < 1:
        line = _line_of(text, '"robots"')
        raise ParseError(f"{source}:{line}: robots must be an integer >= 1, got {robots!r}")
    segs = data["segments"]
    if not isinstance(segs, list):
        raise ParseError(f"{source}: 'segments' must be a list")
    pairs = []
    for i, seg in enumerate(segs):
        where = lambda: _line_of(text, json.dumps(seg[0]) if isinstance(seg, list) and seg else "")
        if not isinstance(seg, list) or len(seg) != 2:
            raise ParseError(f"{source}: segments[{i}] must be a [left, right] pair")
        try:
            if any(isinstance(v, float) for v in seg):
                raise InstanceError("use decimal or 'p/q' strings (or integers) for endpoints")
            left, right = rat(seg[0]), rat(seg[1])
            Interval(left, right)
            if left < 0 or right > 1:
                raise InstanceError(f"[{left}, {right}] lies outside [0, 1]")
            pairs.append((left, right))
        except InstanceError as exc:
            raise ParseError(f"{source}:{where()}: segments[{i}]: {exc}") from exc
    try:
        return Instance(PrioritySet.from_pairs(pairs, strict=strict), robots)
    except InstanceError as exc:
        raise ParseError(f"{source}: {exc}") from exc


def parse_instance(path, strict: bool = False) -> Instance:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    return parse_instance_text(text, strict=strict, source=str(path))


def serialize_instance(inst: Instance) -> str:
    segs = [[str(s.left), str(s.right)] for s in inst.priorities]
    return json.dumps({"segments": segs, "robots": inst.robots}, indent=2) + "\n"


def _num(x) -> dict:
    if x == INFINITY:
        return {"exact": "inf", "decimal": None}
    x = Fraction(x)
    return {"exact": str(x), "decimal": float(x)}


# -- commands ---------------------------------------------------------------

STRATEGIES = {"1": strategy_one, "2": strategy_two, "3": strategy_three, "best": best_strategy}


def cmd_solve(inst: Instance) -> dict:
    rep = lower_bound(inst)
    plan = best_strategy(inst)
    k = inst.robots
    return {
        "robots": k,
        "lambda_prev": {"m": k - 1, **_num(rep.lambda_prev)},
        "Lambda_double": {"m": 2 * k, **_num(rep.Lambda_double)},
        "lower_bound": _num(rep.lower_bound),
        "binding": rep.binding.value,
        "general_position": rep.general_position.value,
        "strategy": plan.source.value,
        "claimed_idle": _num(plan.claimed_idle),
        "optimal": plan.claimed_idle == rep.lower_bound,
    }


def _print_solve(out: dict, inst: Instance):
    k = inst.robots
    print(f"H = {inst.priorities}, k = {k}")
    print(f"lambda_{k - 1} = {_fmt_num(out['lambda_prev'])}")
    print(f"Lambda_{2 * k} = {_fmt_num(out['Lambda_double'])}")
    print(f"lower bound = {_fmt_num(out['lower_bound'])} ({out['binding']}, general position: {out['general_position']})")
    print(f"strategy {out['strategy']}, claimed idle = {_fmt_num(out['claimed_idle'])}")
    if out["optimal"]:
        print("OPTIMAL: claimed idle equals the lower bound")


def _fmt_num(d: dict) -> str:
    if d["exact"] == "inf":
        return "inf"
    return fmt(Fraction(d["exact"]))


def cmd_cover(inst: Instance, kind: str, lids: int, length) -> dict:
    p, l = inst.priorities, rat(length)
    cover = single_cover_feasible(p, lids, l) if kind == "single" else double_cover_feasible(p, lids, l)
    if cover is None:
        raise InfeasibleError(f"no {kind} cover with {lids} lids of length {l}")
    return {"kind": kind, "length": _num(l), "lids": [[str(a.left), str(a.right)] for a in cover.lids]}


def write_trajectories(plan: StrategyPlan, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["robot_id", "time", "position"])
        for rid, tr in enumerate(plan.trajectories):
            for t, x in tr.breakpoints:
                w.writerow([rid, f"{float(t):.12g}", f"{float(x):.12g}"])


def read_trajectories(path) -> list[Trajectory]:
    rows = defaultdict(list)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["robot_id", "time", "position"]:
            raise ParseError(f"{path}: expected header robot_id,time,position")
        for n, row in enumerate(reader, start=2):
            try:
                rows[int(row["robot_id"])].append((Fraction(row["time"]), Fraction(row["position"])))
            except (ValueError, TypeError) as exc:
                raise ParseError(f"{path}:{n}: malformed row {row}") from exc
    return [Trajectory(rows[r]) for r in sorted(rows)]


def cmd_strategy(inst: Instance, kind: str, horizon, out_path) -> StrategyPlan:
    plan = STRATEGIES[kind](inst, rat(horizon) if horizon is not None else None)
    for tr in plan.trajectories:
        bad = validate_trajectory(tr)
        if bad:
            raise AssertionError(f"generated trajectory breaks kinematics: {bad[0]}")
    if out_path:
        write_trajectories(plan, out_path)
    return plan


def cmd_simulate(inst: Instance, plan: StrategyPlan, samples: int, window) -> dict:
    pts = sample_points(inst.priorities, samples)
    rep = measured_idle(plan, pts, window)
    return {
        "max_idle": rep.max_idle,
        "argmax_point": rep.argmax_point,
        "window": list(rep.window),
        "samples": rep.samples,
        "claimed_idle": _num(plan.claimed_idle) if plan.claimed_idle is not None else None,
        "per_point": [
            {"point": r.point, "idle": r.idle, "visit_count": r.visit_count,
             "censored": r.censored, "edge_gap": r.edge_gap}
            for r in rep.per_point
        ],
    }


# -- SVG --------------------------------------------------------------------

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


def export_svg(plan: Optional[StrategyPlan], p: PrioritySet, horizon=None) -> str:
    """Space-time diagram: position on x, time growing downward."""
    W, H, M = 480, 600, 40
    trajs = plan.trajectories if plan else ()
    if horizon is None:
        horizon = max((tr.end for tr in trajs), default=Fraction(1)) or Fraction(1)
    horizon = float(horizon)

    def px(x):
        return f"{M + float(x) * (W - 2 * M):.3f}"

    def py(t):
        return f"{M + float(t) / horizon * (H - 2 * M):.3f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
    ]
    for s in p:
        width = max(float(s.length) * (W - 2 * M), 1.0)
        out.append(f'<rect x="{px(s.left)}" y="{M}" width="{width:.3f}" height="{H - 2 * M}" '
                   'fill="#fdd49e" fill-opacity="0.6"/>')
    out.append(f'<line x1="{M}" y1="{M}" x2="{W - M}" y2="{M}" stroke="black"/>')
    out.append(f'<line x1="{M}" y1="{M}" x2="{M}" y2="{H - M}" stroke="black"/>')
    for v in (0, 0.5, 1):
        out.append(f'<text x="{px(v)}" y="{M - 8}" font-size="11" text-anchor="middle">{v:g}</text>')
    for j in range(5):
        t = horizon * j / 4
        out.append(f'<text x="{M - 6}" y="{py(t)}" font-size="11" text-anchor="end">{t:.4g}</text>')
    for i, tr in enumerate(trajs):
        pts = " ".join(f"{px(x)},{py(t)}" for t, x in tr.breakpoints if float(t) <= horizon)
        out.append(f'<polyline fill="none" stroke="{_PALETTE[i % len(_PALETTE)]}" '
                   f'stroke-width="1.5" points="{pts}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="patrol", description="Priority boundary patrolling on [0, 1].")
    ap.add_argument("--strict", action="store_true", help="reject overlapping segments instead of merging")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="optimal lid lengths, lower bound and best strategy")
    s.add_argument("file")
    s.add_argument("--json", action="store_true", help="print the report as JSON")

    c = sub.add_parser("cover", help="greedy cover for a given lid count and length")
    c.add_argument("file")
    c.add_argument("--kind", choices=["single", "double"], required=True)
    c.add_argument("--lids", type=int, required=True)
    c.add_argument("--length", required=True)

    g = sub.add_parser("strategy", help="write a strategy's trajectories as CSV")
    g.add_argument("file")
    g.add_argument("--kind", choices=list(STRATEGIES), default="best")
    g.add_argument("--horizon")
    g.add_argument("--out", required=True)

    m = sub.add_parser("simulate", help="measure idle time of a plan")
    m.add_argument("file")
    m.add_argument("--traj", help="trajectory CSV; omit to simulate --kind in memory")
    m.add_argument("--kind", choices=list(STRATEGIES), default="best")
    m.add_argument("--horizon")
    m.add_argument("--samples", type=int, default=512)
    m.add_argument("--window", nargs=2, metavar=("T0", "T1"))
    m.add_argument("--json", action="store_true")

    e = sub.add_parser("export-svg", help="space-time diagram of a strategy")
    e.add_argument("file")
    e.add_argument("--kind", choices=list(STRATEGIES), default="best")
    e.add_argument("--horizon")
    e.add_argument("--out", required=True)
    return ap


def _run(args) -> int:
    inst = parse_instance(args.file, strict=args.strict)
    horizon = getattr(args, "horizon", None)
    if args.command == "solve":
        out = cmd_solve(inst)
        print(json.dumps(out, indent=2)) if args.json else _print_solve(out, inst)
    elif args.command == "cover":
        out = cmd_cover(inst, args.kind, args.lids, args.length)
        print(json.dumps(out, indent=2))
    elif args.command == "strategy":
        plan = cmd_strategy(inst, args.kind, horizon, args.out)
        print(f"{plan.source.value}: {len(plan.trajectories)} robots, claimed idle {fmt(plan.claimed_idle)}, "
              f"horizon {fmt(plan.horizon)} -> {args.out}")
    elif args.command == "simulate":
        if args.traj:
            trajs = read_trajectories(args.traj)
            plan = StrategyPlan(inst, tuple(trajs), None, None)
            end = min(tr.end for tr in trajs)
            window = (rat(args.window[0]), rat(args.window[1])) if args.window else (Fraction(0), end)
        else:
            plan = cmd_strategy(inst, args.kind, horizon, None)
            window = (rat(args.window[0]), rat(args.window[1])) if args.window else (plan.warmup, plan.horizon)
        out = cmd_simulate(inst, plan, args.samples, window)
        if args.json:
            print(json.dumps(out, indent=2))
        else:
            print(f"window [{window[0]}, {window[1]}], {out['samples']} sample points")
            print(f"{'point':>14} {'idle':>14} {'visits':>7}")
            for r in sorted(out["per_point"], key=lambda r: -r["idle"])[:10]:
                print(f"{r['point']:14.9f} {r['idle']:14.9f} {r['visit_count']:7d}")
            print(f"max idle {out['max_idle']:.12g} at {out['argmax_point']}")
    elif args.command == "export-svg":
        plan = cmd_strategy(inst, args.kind, horizon, None)
        Path(args.out).write_text(export_svg(plan, inst.priorities, plan.horizon))
        print(f"wrote {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return _run(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InfeasibleError, InstanceError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
