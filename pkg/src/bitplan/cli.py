"""Command-line interface: single runs, benchmarks, and the demo scenario.

Exit codes: 0 success, 1 usage error, 2 runtime failure. All outputs are a
pure function of (scenario, seed): rerunning a command reproduces its CSV
and SVG files byte for byte.
"""

from __future__ import annotations

import argparse
import math
import statistics
import sys
from dataclasses import replace
from pathlib import Path

from .bench import (
    PLANNERS,
    ConvergenceSeries,
    ScenarioError,
    aggregate,
    resolve_scenario,
    run_single,
    run_trials,
    with_stop,
    write_convergence_csv,
)
from .bitstar import StopCondition
from .space import SamplerStarvedError
from .svg import render_svg
from .world import GridLoadError


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="bitplan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, planner_required=True):
        p.add_argument("--scenario", required=True, help="scenario file path or built-in name (e.g. demo)")
        if planner_required:
            p.add_argument("--planner", required=True, choices=PLANNERS)
        p.add_argument("--seed", type=int, default=None, help="override the scenario base seed")
        p.add_argument("--time-budget", type=float, default=None, metavar="S",
                       help="override stop: planner-seconds budget")
        p.add_argument("--max-batches", type=int, default=None, metavar="N",
                       help="override stop: batch (bitstar) / iteration (rrtstar) cap")
        p.add_argument("--out", type=Path, default=None, help="CSV output path")

    p_plan = sub.add_parser("plan", help="run one trial and emit its convergence CSV")
    common(p_plan)
    p_plan.add_argument("--svg-dir", type=Path, default=None,
                        help="write per-batch SVG snapshots here (bitstar only)")

    p_bench = sub.add_parser("bench", help="run seeded trials and emit the aggregate CSV")
    common(p_bench)
    p_bench.add_argument("--trials", type=int, default=None, help="override the scenario trial count")
    p_bench.add_argument("--grid-step", type=float, default=0.1, metavar="S",
                         help="aggregate time-grid step (default 0.1)")

    p_demo = sub.add_parser("demo", help="run the built-in demo with per-batch snapshots")
    p_demo.add_argument("--seed", type=int, default=None)
    p_demo.add_argument("--out", type=Path, default=None)
    p_demo.add_argument("--svg-dir", type=Path, default=Path("demo_out"))
    p_demo.add_argument("--max-batches", type=int, default=None, metavar="N")

    return parser


def _apply_stop_overrides(scenario, time_budget, max_batches):
    if time_budget is None and max_batches is None:
        return scenario
    old = scenario.bitstar.stop
    stop = StopCondition(
        time_budget_s=time_budget if time_budget is not None else old.time_budget_s,
        max_batches=max_batches if max_batches is not None else old.max_batches,
        target_cost=old.target_cost,
    )
    return with_stop(scenario, stop)


def _snapshot_hook(svg_dir: Path, scenario):
    svg_dir.mkdir(parents=True, exist_ok=True)
    problem = scenario.problem

    def hook(batch: int, ctx):
        tree = ctx.tree
        edges = [
            (tree.state(tree.parent(vid)), state)
            for vid, state in tree.items()
            if tree.parent(vid) is not None
        ]
        path = None
        if ctx.v_sol:
            best = min(ctx.v_sol, key=lambda v: (tree.cost_to_come(v), v))
            path = tree.solution(best)
        ellipse = None
        if math.isfinite(ctx.c_sol):
            ellipse = (problem.root, problem.goal_region.center, ctx.c_sol)
        render_svg(scenario.world, edges, path, ellipse, list(ctx.x_ncon),
                   svg_dir / f"batch_{batch:03d}.svg")

    return hook


def _cmd_plan(args) -> int:
    scenario = _apply_stop_overrides(
        resolve_scenario(args.scenario), args.time_budget, args.max_batches
    )
    seed = args.seed if args.seed is not None else scenario.base_seed
    hooks = {}
    if getattr(args, "svg_dir", None) is not None:
        if args.planner == "bitstar":
            hooks["batch_hook"] = _snapshot_hook(args.svg_dir, scenario)
        else:
            print("note: --svg-dir snapshots are per batch and apply to bitstar only",
                  file=sys.stderr)
    result = run_single(scenario, args.planner, seed, **hooks)
    if args.out is not None:
        write_convergence_csv(ConvergenceSeries(args.planner, seed, tuple(result.convergence)),
                              args.out)
    print(f"{args.planner} seed={seed} cost={result.cost:.6f} "
          f"records={len(result.convergence)}")
    return 0


def _cmd_bench(args) -> int:
    scenario = _apply_stop_overrides(
        resolve_scenario(args.scenario), args.time_budget, args.max_batches
    )
    if args.seed is not None:
        scenario = replace(scenario, base_seed=args.seed)
    trials = args.trials if args.trials is not None else scenario.trials
    series = run_trials(scenario, args.planner, trials)
    stop = scenario.bitstar.stop
    horizon = stop.time_budget_s
    if horizon is None:
        # Cover the slowest trial: round its end time up to the grid.
        last = max((s.points[-1].elapsed_s for s in series if s.points), default=0.0)
        horizon = math.ceil(last / args.grid_step) * args.grid_step
    table = aggregate(series, args.grid_step, horizon)
    if args.out is not None:
        write_convergence_csv(table, args.out)
    final = [s.points[-1].cost for s in series]
    solved = [c for c in final if math.isfinite(c)]
    med = statistics.median(solved) if solved else math.nan
    print(f"{args.planner} trials={trials} solved={len(solved)} median_final_cost={med:.6f}")
    return 0


def _cmd_demo(args) -> int:
    scenario = resolve_scenario("demo")
    if args.max_batches is not None:
        scenario = _apply_stop_overrides(scenario, None, args.max_batches)
    seed = args.seed if args.seed is not None else scenario.base_seed
    hooks = {"batch_hook": _snapshot_hook(args.svg_dir, scenario)}
    result = run_single(scenario, "bitstar", seed, **hooks)
    if args.out is not None:
        write_convergence_csv(ConvergenceSeries("bitstar", seed, tuple(result.convergence)),
                              args.out)
    print(f"demo seed={seed} cost={result.cost:.6f} snapshots in {args.svg_dir}")
    return 0


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:  # --help
        return int(e.code or 0)
    try:
        if args.command == "plan":
            return _cmd_plan(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_demo(args)
    except (ScenarioError, GridLoadError, SamplerStarvedError, OSError, ValueError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
