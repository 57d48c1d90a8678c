"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete. The heavy trial batteries are module-scoped fixtures
shared across criteria.
"""

from __future__ import annotations

import heapq
import math
import random
import statistics

import numpy as np
import pytest

from bitplan import RngStream, World, c_hat, h_hat
from bitplan.bench import resolve_scenario, run_single, with_stop
from bitplan.bitstar import PlannerParams, StopCondition, plan
from bitplan.cli import cli_main
from bitplan.tree import Tree
from conftest import DEMO_BOUNDS, make_demo_problem, tree_audit

# 8-connected shortest path across the demo world on a 0.05 m lattice,
# computed by the Dijkstra oracle below and frozen here.
ORACLE_COST = 17.284062043356666

SEEDS = range(1, 21)


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"[criterion {num}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num} failed: {detail}"


def _grid_shortest_path(resolution: float = 0.05) -> float:
    """Independent reference optimum: Dijkstra on an 8-connected lattice.

    Uses its own obstacle algebra (boundary blocked, matching the world
    contract) rather than any planner code.
    """
    lo, hi = -10.0, 10.0
    n = int(round((hi - lo) / resolution)) + 1
    xs = lo + resolution * np.arange(n)
    gx, gy = np.meshgrid(xs, xs, indexing="ij")
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    free = np.ones(len(pts), dtype=bool)
    for (cx, cy), r in [((0.0, 0.0), 1.5), ((-7.0, 0.0), 1.5), ((7.0, 0.0), 1.5)]:
        free &= (pts[:, 0] - cx) ** 2 + (pts[:, 1] - cy) ** 2 > r * r
    free = free.reshape(n, n)

    start = (200, 40)   # (0, -8)
    goal = (200, 360)   # (0, 8)
    assert free[start] and free[goal]
    diag = resolution * math.sqrt(2.0)
    moves = [(1, 0, resolution), (-1, 0, resolution), (0, 1, resolution), (0, -1, resolution),
             (1, 1, diag), (1, -1, diag), (-1, 1, diag), (-1, -1, diag)]
    dist = np.full((n, n), math.inf)
    dist[start] = 0.0
    pq = [(0.0, start)]
    while pq:
        d, (i, j) = heapq.heappop(pq)
        if (i, j) == goal:
            return d
        if d > dist[i, j]:
            continue
        for di, dj, c in moves:
            ni, nj = i + di, j + dj
            if 0 <= ni < n and 0 <= nj < n and free[ni, nj] and d + c < dist[ni, nj]:
                dist[ni, nj] = d + c
                heapq.heappush(pq, (d + c, (ni, nj)))
    return math.inf


@pytest.fixture(scope="module")
def demo_scenario():
    return resolve_scenario("demo")


@pytest.fixture(scope="module")
def ten_batch_results(demo_scenario):
    return [run_single(demo_scenario, "bitstar", seed) for seed in SEEDS]


@pytest.fixture(scope="module")
def one_second_results(demo_scenario):
    budget = with_stop(demo_scenario, StopCondition(time_budget_s=1.0))
    return {
        planner: [run_single(budget, planner, seed) for seed in SEEDS]
        for planner in ("bitstar", "rrtstar")
    }


def test_criterion_1_demo_world_near_optimality(ten_batch_results):
    oracle = _grid_shortest_path()
    assert abs(oracle - ORACLE_COST) < 1e-9, f"oracle drifted: {oracle!r}"
    med = statistics.median(r.cost for r in ten_batch_results)
    ok = med <= 1.05 * oracle
    _report(1, ok, f"median cost {med:.4f} <= 1.05 x oracle {oracle:.4f} = {1.05 * oracle:.4f}")


def test_criterion_2_anytime_monotonicity(ten_batch_results, one_second_results):
    trials = list(ten_batch_results)
    for results in one_second_results.values():
        trials.extend(results)
    bad = 0
    for r in trials:
        costs = [p.cost for p in r.convergence]
        if any(a < b for a, b in zip(costs, costs[1:])):
            bad += 1
    _report(2, bad == 0, f"{len(trials)} trials, {bad} with an increasing cost record")


def test_criterion_3_prune_soundness(demo_scenario):
    problem = demo_scenario.problem
    goals = problem.goal_samples
    violations = []
    calls = 0

    def check(ctx):
        nonlocal calls
        calls += 1
        for vid in ctx.tree.vertex_ids():
            key = ctx.tree.cost_to_come(vid) + h_hat(ctx.tree.state(vid), goals)
            if key > ctx.c_sol:
                violations.append(("vertex", vid, key, ctx.c_sol))
        for x in ctx.x_ncon:
            est = c_hat(problem.root, x) + h_hat(x, goals)
            if est >= ctx.c_sol:
                violations.append(("sample", x, est, ctx.c_sol))

    for seed in (1, 2, 3):
        plan(problem, demo_scenario.world, demo_scenario.bitstar, RngStream(seed),
             prune_hook=check)
    ok = calls > 0 and not violations
    _report(3, ok, f"{calls} instrumented prunes, {len(violations)} violations")


def test_criterion_4_queue_dominance():
    rng = random.Random(44)
    worst = -math.inf
    for _ in range(10_000):
        v = (rng.uniform(-10, 10), rng.uniform(-10, 10))
        x = (rng.uniform(-10, 10), rng.uniform(-10, 10))
        goals = tuple(
            (rng.uniform(-10, 10), rng.uniform(-10, 10)) for _ in range(rng.randint(1, 3))
        )
        g_v = rng.uniform(0, 30)  # any cost-to-come; it appears on both sides
        vertex_key = g_v + h_hat(v, goals)
        edge_key = g_v + c_hat(v, x) + h_hat(x, goals)
        worst = max(worst, vertex_key - edge_key)
    ok = worst <= 1e-9
    _report(4, ok, f"10000 pairs, max(vertex_key - edge_key) = {worst:.3e} <= 1e-9")


def test_criterion_5_tree_fuzz_audit():
    rng = random.Random(55)
    tree = Tree((0.0, 0.0))
    ids = [tree.root_id]
    ops = 0
    while ops < 10_000:
        roll = rng.random()
        if roll < 0.55 or len(ids) < 3:
            parent = rng.choice(ids)
            state = (rng.uniform(-100, 100), rng.uniform(-100, 100))
            if tree.has_state(state):
                continue
            ids.append(tree.add_child(parent, state, rng.uniform(0.0, 10.0)))
        elif roll < 0.85:
            child = rng.choice(ids[1:])
            parent = rng.choice(ids)
            try:
                tree.rewire(child, parent, rng.uniform(0.0, 10.0))
            except ValueError:
                pass  # rejected cycles still count as exercised operations
        else:
            victim = rng.choice(ids[1:])
            gone = {vid for vid, _ in tree.remove_subtree(victim)}
            ids = [v for v in ids if v not in gone]
        ops += 1
        if ops % 1000 == 0:
            tree_audit(tree, tol=1e-9)
    tree_audit(tree, tol=1e-9)
    _report(5, True, f"{ops} randomized operations, final tree size {len(tree)}, audit clean")


def test_criterion_6_bitstar_beats_rrtstar_at_budget(one_second_results):
    med_bit = statistics.median(r.cost for r in one_second_results["bitstar"])
    med_rrt = statistics.median(r.cost for r in one_second_results["rrtstar"])
    ok = med_bit <= med_rrt
    _report(6, ok, f"median at 1 s: bitstar {med_bit:.4f} <= rrtstar {med_rrt:.4f}")


def test_criterion_7_batch_zero_trivial_case():
    problem = make_demo_problem()
    world = World(DEMO_BOUNDS, [])
    params = PlannerParams(batch_size=100, radius=20.0, stop=StopCondition(max_batches=10))
    result = plan(problem, world, params, RngStream(123))
    direct = c_hat(problem.root, problem.goal_samples[0])
    first = result.convergence[0]
    ok = first.samples_drawn == 0 and abs(result.cost - direct) <= 1e-9
    _report(7, ok, f"solved with {first.samples_drawn} samples at cost {result.cost!r} "
                   f"(direct distance {direct!r})")


def test_criterion_8_cli_byte_determinism(tmp_path):
    outputs = []
    for tag in ("one", "two"):
        csv = tmp_path / f"{tag}.csv"
        svgs = tmp_path / f"{tag}_svgs"
        rc = cli_main([
            "plan", "--scenario", "demo", "--planner", "bitstar", "--seed", "7",
            "--max-batches", "3", "--out", str(csv), "--svg-dir", str(svgs),
        ])
        assert rc == 0
        agg = tmp_path / f"{tag}_agg.csv"
        rc = cli_main([
            "bench", "--scenario", "demo", "--planner", "rrtstar", "--trials", "3",
            "--time-budget", "0.5", "--out", str(agg),
        ])
        assert rc == 0
        blob = [csv.read_bytes(), agg.read_bytes()]
        for f in sorted(svgs.iterdir()):
            blob.append(f.read_bytes())
        outputs.append(blob)
    ok = outputs[0] == outputs[1] and len(outputs[0]) > 2
    _report(8, ok, f"{len(outputs[0])} output files byte-identical across reruns")


def test_criterion_9_heuristic_admissibility(demo_world):
    rng = random.Random(99)

    def free_point():
        while True:
            x = (rng.uniform(-10, 10), rng.uniform(-10, 10))
            if demo_world.is_free(x):
                return x

    bad = 0
    for _ in range(10_000):
        a, b = free_point(), free_point()
        if c_hat(a, b) > demo_world.true_cost(a, b):
            bad += 1
    _report(9, bad == 0, f"10000 free pairs, {bad} with c_hat exceeding the true cost")
