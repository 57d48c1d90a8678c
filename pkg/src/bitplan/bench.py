"""Scenario files, seeded multi-trial execution, aggregation, and CSV output.

Scenario format (line-oriented, '#' starts a comment, blank lines ignored):

    name = demo                 # optional, defaults to the file stem
    [world]
    bounds = XMIN YMIN XMAX YMAX
    checks_per_meter = 4        # optional, default 4
    [obstacles]                 # or a [grid] section, not both
    circle CX CY R
    rect XMIN YMIN XMAX YMAX
    [grid]
    file = map.pgm              # relative to the scenario file
    meters_per_cell = 0.1
    origin = X Y
    threshold = 127
    [problem]
    root = X Y
    goal_center = X Y
    goal_radius = R
    goal_sample = X Y           # repeatable; defaults to goal_center
    [bitstar]
    batch_size = 100
    rho = 8
    [rrtstar]
    eta = 2
    alpha = 20
    goal_period = 50
    [stop]                      # at least one bound
    max_batches = 10
    time_budget_s = 1.0
    target_cost = 17.0
    [bench]
    trials = 20                 # optional, default 20
    base_seed = 1               # optional, default 1

Trial k of a benchmark uses seed base_seed + k, so reruns and concurrent
executions produce identical, order-stable results.
"""

from __future__ import annotations

import math
import statistics
from bisect import bisect_right
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .bitstar import ConvergencePoint, PlannerParams, StopCondition, plan
from .rrtstar import RrtParams, rrt_plan
from .space import Box, GoalRegion, ProblemDef, RngStream, State
from .world import Circle, Rect, World, load_occupancy_grid

PLANNERS = ("bitstar", "rrtstar")


class ScenarioError(ValueError):
    """Scenario file failed to parse or validate; message names file:line/field."""


@dataclass(frozen=True)
class Scenario:
    name: str
    world: World
    problem: ProblemDef
    bitstar: PlannerParams
    rrtstar: RrtParams
    trials: int
    base_seed: int


@dataclass(frozen=True)
class ConvergenceSeries:
    """One trial's improvement trace; elapsed strictly increasing, cost non-increasing."""

    planner: str
    seed: int
    points: tuple[ConvergencePoint, ...]


@dataclass(frozen=True)
class AggregateTable:
    """Per-gridpoint statistics over the trials that have a solution by then."""

    times: tuple[float, ...]
    n_solved: tuple[int, ...]
    median_cost: tuple[float, ...]
    mean_cost: tuple[float, ...]


def builtin_scenario_path(name: str) -> Path:
    p = resources.files("bitplan").joinpath(f"scenarios/{name}.scn")
    return Path(str(p))


def resolve_scenario(ref: str) -> Scenario:
    """Load a scenario from a path, or by built-in name (e.g. "demo")."""
    p = Path(ref)
    if p.exists():
        return load_scenario(p)
    builtin = builtin_scenario_path(ref)
    if builtin.exists():
        return load_scenario(builtin)
    raise ScenarioError(f"scenario {ref!r}: no such file or built-in scenario")


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError(f"{path}: {e}") from e

    top: dict[str, tuple[int, str]] = {}
    sections: dict[str, dict[str, tuple[int, str]]] = {}
    obstacle_lines: list[tuple[int, str]] = []
    goal_sample_lines: list[tuple[int, str]] = []
    section = None

    def err(line_no: int, msg: str):
        raise ScenarioError(f"{path}:{line_no}: {msg}")

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in ("world", "obstacles", "grid", "problem", "bitstar", "rrtstar", "stop", "bench"):
                err(line_no, f"unknown section [{section}]")
            sections.setdefault(section, {})
            continue
        if section == "obstacles":
            obstacle_lines.append((line_no, line))
            continue
        if "=" not in line:
            err(line_no, "expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            err(line_no, "empty key")
        if section == "problem" and key == "goal_sample":
            goal_sample_lines.append((line_no, value))
            continue
        store = top if section is None else sections[section]
        if key in store:
            err(line_no, f"duplicate key {key!r}")
        store[key] = (line_no, value)

    def get(section_name, key, required=True, default=None):
        store = top if section_name is None else sections.get(section_name, {})
        if key not in store:
            if required:
                where = f"[{section_name}]" if section_name else "top level"
                raise ScenarioError(f"{path}: missing required key {key!r} in {where}")
            return None, default
        return store[key]

    def floats(section_name, key, n, required=True, default=None):
        line_no, value = get(section_name, key, required, None)
        if value is None:
            return default
        parts = value.split()
        if len(parts) != n:
            err(line_no, f"{key}: expected {n} numbers, got {len(parts)}")
        try:
            return tuple(float(p) for p in parts)
        except ValueError:
            err(line_no, f"{key}: not a number")

    def scalar(section_name, key, conv, required=True, default=None):
        line_no, value = get(section_name, key, required, None)
        if value is None:
            return default
        try:
            return conv(value)
        except ValueError:
            err(line_no, f"{key}: invalid value {value!r}")

    def positive(section_name, key, conv, required=True, default=None):
        v = scalar(section_name, key, conv, required, default)
        if v is not None and v <= 0:
            line_no, _ = get(section_name, key)
            err(line_no, f"{key}: must be positive")
        return v

    name = scalar(None, "name", str, required=False, default=path.stem)

    b = floats("world", "bounds", 4)
    try:
        bounds = Box((b[0], b[1]), (b[2], b[3]))
    except ValueError as e:
        raise ScenarioError(f"{path}: bounds: {e}") from e
    cpm = positive("world", "checks_per_meter", float, required=False, default=4.0)

    has_obstacles = "obstacles" in sections
    has_grid = "grid" in sections
    if has_obstacles and has_grid:
        raise ScenarioError(f"{path}: give either [obstacles] or [grid], not both")
    if has_grid:
        grid_file = scalar("grid", "file", str)
        grid_path = path.parent / grid_file
        if not grid_path.exists():
            line_no, _ = get("grid", "file")
            err(line_no, f"file: {grid_path} does not exist")
        mpc = positive("grid", "meters_per_cell", float)
        origin = floats("grid", "origin", 2)
        threshold = scalar("grid", "threshold", int)
        world = load_occupancy_grid(grid_path, mpc, origin, threshold)
        world = World(grid=world.grid, checks_per_meter=cpm)
    else:
        obstacles = []
        for line_no, line in obstacle_lines:
            parts = line.split()
            try:
                if parts[0] == "circle" and len(parts) == 4:
                    cx, cy, r = (float(p) for p in parts[1:])
                    obstacles.append(Circle((cx, cy), r))
                elif parts[0] == "rect" and len(parts) == 5:
                    x0, y0, x1, y1 = (float(p) for p in parts[1:])
                    obstacles.append(Rect((x0, y0), (x1, y1)))
                else:
                    err(line_no, f"expected 'circle CX CY R' or 'rect XMIN YMIN XMAX YMAX', got {line!r}")
            except ScenarioError:
                raise
            except ValueError as e:
                err(line_no, f"bad obstacle: {e}")
        world = World(bounds, obstacles, checks_per_meter=cpm)

    root = floats("problem", "root", 2)
    goal_center = floats("problem", "goal_center", 2)
    goal_radius = positive("problem", "goal_radius", float)
    goal_samples = tuple(
        _parse_point(path, line_no, value) for line_no, value in goal_sample_lines
    ) or (goal_center,)
    try:
        problem = ProblemDef(root, goal_samples, GoalRegion(goal_center, goal_radius), bounds)
        problem.validate(world)
    except ValueError as e:
        raise ScenarioError(f"{path}: problem: {e}") from e

    time_budget = positive("stop", "time_budget_s", float, required=False)
    max_batches = scalar("stop", "max_batches", int, required=False)
    if max_batches is not None and max_batches < 0:
        line_no, _ = get("stop", "max_batches")
        err(line_no, "max_batches: must be non-negative")
    target_cost = positive("stop", "target_cost", float, required=False)
    try:
        stop = StopCondition(time_budget, max_batches, target_cost)
    except ValueError as e:
        raise ScenarioError(f"{path}: [stop]: {e}") from e

    try:
        bit = PlannerParams(
            batch_size=positive("bitstar", "batch_size", int),
            radius=positive("bitstar", "rho", float),
            stop=stop,
        )
        rrt = RrtParams(
            eta=positive("rrtstar", "eta", float),
            alpha=positive("rrtstar", "alpha", int),
            goal_period=positive("rrtstar", "goal_period", int),
            stop=stop,
        )
    except ValueError as e:
        raise ScenarioError(f"{path}: planner params: {e}") from e

    trials = positive("bench", "trials", int, required=False, default=20)
    base_seed = scalar("bench", "base_seed", int, required=False, default=1)
    if base_seed < 0:
        line_no, _ = get("bench", "base_seed")
        err(line_no, "base_seed: must be non-negative")

    return Scenario(name, world, problem, bit, rrt, trials, base_seed)


def _parse_point(path, line_no, value) -> State:
    parts = value.split()
    if len(parts) != 2:
        raise ScenarioError(f"{path}:{line_no}: goal_sample: expected 2 numbers")
    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError:
        raise ScenarioError(f"{path}:{line_no}: goal_sample: not a number") from None


def with_stop(scenario: Scenario, stop: StopCondition) -> Scenario:
    """Scenario with the stop condition replaced for both planners."""
    return replace(
        scenario,
        bitstar=replace(scenario.bitstar, stop=stop),
        rrtstar=replace(scenario.rrtstar, stop=stop),
    )


def run_single(scenario: Scenario, planner: str, seed: int, **hooks):
    if planner == "bitstar":
        return plan(scenario.problem, scenario.world, scenario.bitstar, RngStream(seed), **hooks)
    if planner == "rrtstar":
        return rrt_plan(scenario.problem, scenario.world, scenario.rrtstar, RngStream(seed))
    raise ValueError(f"unknown planner {planner!r}; expected one of {PLANNERS}")


def run_trials(scenario: Scenario, planner: str, n: int) -> list[ConvergenceSeries]:
    """n independent trials with seeds base_seed .. base_seed + n - 1."""
    if n < 1:
        raise ValueError("trial count must be at least 1")
    if planner not in PLANNERS:
        raise ValueError(f"unknown planner {planner!r}; expected one of {PLANNERS}")
    out = []
    for k in range(n):
        seed = scenario.base_seed + k
        try:
            result = run_single(scenario, planner, seed)
        except Exception as e:
            raise RuntimeError(f"trial with seed {seed} failed: {e}") from e
        out.append(ConvergenceSeries(planner, seed, tuple(result.convergence)))
    return out


def cost_at(series: ConvergenceSeries, t: float) -> float:
    """Staircase interpolation: last recorded cost at or before t, else +inf."""
    times = [p.elapsed_s for p in series.points]
    i = bisect_right(times, t)
    return series.points[i - 1].cost if i else math.inf


def aggregate(series_list, grid_step: float, horizon: float) -> AggregateTable:
    """Median/mean cost on a uniform time grid over trials solved by each time.

    A trial contributes at grid time t only once it has a finite cost at t
    (staircase interpolation of its improvement trace).
    """
    if grid_step <= 0:
        raise ValueError("grid step must be positive")
    times = [i * grid_step for i in range(int(math.floor(horizon / grid_step)) + 1)]
    n_solved, medians, means = [], [], []
    for t in times:
        costs = [c for s in series_list if math.isfinite(c := cost_at(s, t))]
        n_solved.append(len(costs))
        medians.append(statistics.median(costs) if costs else math.nan)
        means.append(statistics.fmean(costs) if costs else math.nan)
    return AggregateTable(tuple(times), tuple(n_solved), tuple(medians), tuple(means))


def write_convergence_csv(obj, path) -> None:
    """Write a per-trial trace or an aggregate table as CSV.

    Fixed 6-decimal float formatting makes output bytes a pure function of
    the data.
    """
    if isinstance(obj, AggregateTable):
        lines = ["t_s,n_solved,median_cost,mean_cost"]
        for t, n, med, mean in zip(obj.times, obj.n_solved, obj.median_cost, obj.mean_cost):
            lines.append(f"{t:.6f},{n},{med:.6f},{mean:.6f}")
    else:
        points = obj.points if isinstance(obj, ConvergenceSeries) else obj
        lines = ["elapsed_s,cost,batch,tree_vertices,samples_drawn"]
        for p in points:
            lines.append(
                f"{p.elapsed_s:.6f},{p.cost:.6f},{p.batch},{p.tree_vertices},{p.samples_drawn}"
            )
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
