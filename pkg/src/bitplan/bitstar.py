"""Batch Informed Trees (BIT*): anytime, asymptotically optimal planning.

The planner interleaves two priority queues: a vertex queue keyed by
cost-to-come + heuristic cost-to-go, and an edge queue keyed by
cost-to-come + heuristic edge cost + heuristic cost-to-go. Because the
vertex key lower-bounds every edge key the vertex can produce, processing
the cheaper queue first exhausts all potentially useful edges before any
expensive collision check runs. When both queues are empty, the batch ends:
provably useless vertices and samples are pruned and a fresh batch of
uniform samples is drawn from the informed set.

Time is measured on the deterministic work clock of CountingWorld (one unit
per point collision check or neighbor-scan candidate), so identical seeds
replay identical runs byte for byte.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .queues import CostQueue
from .space import ProblemDef, RngStream, State, c_hat, g_hat, h_hat, sample_batch
from .tree import Tree
from .world import CountingWorld, World


@dataclass(frozen=True)
class StopCondition:
    """Any-of termination bounds; at least one must be set.

    time_budget_s counts planner seconds on the deterministic work clock;
    max_batches bounds the number of sampled batches (0 allows only the
    direct root-to-goal attempt); target_cost stops at the first solution
    at or below the target.
    """

    time_budget_s: float | None = None
    max_batches: int | None = None
    target_cost: float | None = None

    def __post_init__(self):
        if self.time_budget_s is None and self.max_batches is None and self.target_cost is None:
            raise ValueError("at least one stop bound must be set")
        if self.time_budget_s is not None and self.time_budget_s < 0:
            raise ValueError("time budget must be non-negative")
        if self.max_batches is not None and self.max_batches < 0:
            raise ValueError("max batches must be non-negative")


@dataclass(frozen=True)
class PlannerParams:
    batch_size: int
    radius: float
    stop: StopCondition

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch size must be at least 1")
        if self.radius <= 0:
            raise ValueError("connection radius must be positive")


class ConvergencePoint(NamedTuple):
    elapsed_s: float
    cost: float
    batch: int
    tree_vertices: int
    samples_drawn: int


@dataclass
class PlanResult:
    """Best path found (None if none), its cost, and the improvement trace."""

    path: list[State] | None
    cost: float
    convergence: list[ConvergencePoint]


@dataclass
class PlannerContext:
    """All mutable planner state threaded through the per-iteration steps.

    x_ncon and x_new are insertion-ordered state sets (dicts with None
    values) so that every iteration order in the planner is deterministic.
    c_sol is the incumbent solution cost and doubles as the pruning
    threshold; it never increases.
    """

    tree: Tree
    qv: CostQueue = field(default_factory=CostQueue)
    qe: CostQueue = field(default_factory=CostQueue)
    x_ncon: dict[State, None] = field(default_factory=dict)
    x_new: dict[State, None] = field(default_factory=dict)
    v_exp: set[int] = field(default_factory=set)
    v_rewire: set[int] = field(default_factory=set)
    v_sol: set[int] = field(default_factory=set)
    c_sol: float = math.inf


def near(x: State, candidates, radius: float) -> list[State]:
    """Candidates within `radius` of x by Euclidean distance, excluding x.

    The boundary is included (distance == radius qualifies). Candidate order
    is preserved.
    """
    cands = list(candidates)
    if not cands:
        return []
    arr = np.asarray(cands, dtype=float)
    d2 = ((arr - np.asarray(x, dtype=float)) ** 2).sum(axis=1)
    keep = np.flatnonzero(d2 <= radius * radius)
    return [cands[i] for i in keep if cands[i] != x]


def near_vertices(x: State, tree: Tree, radius: float) -> list[tuple[int, State]]:
    """Tree vertices within `radius` of x, excluding any vertex at x itself."""
    ids, arr = tree.states_matrix()
    d2 = ((arr - np.asarray(x, dtype=float)) ** 2).sum(axis=1)
    keep = np.flatnonzero(d2 <= radius * radius)
    out = []
    for i in keep:
        vid = ids[i]
        state = tree.state(vid)
        if state != x:
            out.append((vid, state))
    return out


def prune(ctx: PlannerContext, problem: ProblemDef) -> list[State]:
    """Drop everything that provably cannot improve the incumbent solution.

    Unconnected samples go when g_hat + h_hat >= c_sol. Tree vertices go when
    their tree key g_T + h_hat exceeds c_sol; the key is monotone along any
    root path, so whole subtrees are removed root-first, which matches the
    per-vertex rule exactly. Removed states that still pass the g_hat + h_hat
    test are returned for reuse as unconnected samples (this keeps sample
    density uniform inside the informed set). The root is never removed.
    """
    c = ctx.c_sol
    if math.isinf(c):
        return []
    goals = problem.goal_samples
    ctx.x_ncon = {
        x: None for x in ctx.x_ncon if g_hat(x, problem) + h_hat(x, goals) < c
    }
    x_reuse: list[State] = []
    tree = ctx.tree
    queue = deque([tree.root_id])
    while queue:
        vid = queue.popleft()
        for ch in tree.children(vid):
            if tree.cost_to_come(ch) + h_hat(tree.state(ch), goals) > c:
                for rid, s in tree.remove_subtree(ch):
                    ctx.v_exp.discard(rid)
                    ctx.v_rewire.discard(rid)
                    ctx.v_sol.discard(rid)
                    if g_hat(s, problem) + h_hat(s, goals) < c:
                        x_reuse.append(s)
            else:
                queue.append(ch)
    return x_reuse


def start_new_batch(ctx: PlannerContext, problem: ProblemDef, world, params: PlannerParams,
                    rng: RngStream, *, prune_hook: Callable | None = None) -> None:
    """Prune, draw a fresh batch, and requeue every tree vertex.

    New samples are informed once an incumbent exists. Reused pruned states
    rejoin x_ncon but not x_new: vertices that saw them in earlier batches
    already considered those connections, and pruned vertices lose their
    expanded flag, so no connection opportunity is lost.
    """
    if ctx.qv or ctx.qe:
        raise ValueError("a new batch may only start when both queues are empty")
    x_reuse = prune(ctx, problem)
    if prune_hook is not None:
        prune_hook(ctx)
    fresh = sample_batch(params.batch_size, problem, world, ctx.c_sol, rng)
    ctx.x_new = {}
    for x in fresh:
        if not ctx.tree.has_state(x):  # keep tree and sample sets disjoint
            ctx.x_ncon[x] = None
            ctx.x_new[x] = None
    for x in x_reuse:
        ctx.x_ncon[x] = None
    goals = problem.goal_samples
    tree = ctx.tree
    for vid, state in tree.items():
        g = tree.cost_to_come(vid)
        ctx.qv.insert(g + h_hat(state, goals), g, vid)


def _h_array(arr: np.ndarray, goals: tuple[State, ...]) -> np.ndarray:
    """Heuristic cost-to-go of every row of arr (min distance to a goal sample)."""
    if len(goals) == 1:
        return np.sqrt(((arr - np.asarray(goals[0], dtype=float)) ** 2).sum(axis=1))
    per_goal = [
        np.sqrt(((arr - np.asarray(g, dtype=float)) ** 2).sum(axis=1)) for g in goals
    ]
    return np.minimum.reduce(per_goal)


def expand_vertex(ctx: PlannerContext, problem: ProblemDef, params: PlannerParams) -> int:
    """Pop the best vertex and queue its potentially useful outgoing edges.

    Runs entirely on heuristics, no collision checks. Edges to unconnected
    samples are admitted with the optimistic g_hat test; a first-time vertex
    scans all of x_ncon, a repeat only this batch's new samples. Rewiring
    edges to tree neighbors are queued once per vertex and only after a
    solution exists. Queue entries memoize the edge and cost-to-go
    heuristics (pure functions of the states); only cost-to-come can go
    stale and is re-read at pop time. Returns the number of candidates
    scanned so the caller can charge the work clock.
    """
    scanned = 0
    _, _, vid = ctx.qv.pop_best()
    tree = ctx.tree
    vstate = tree.state(vid)
    goals = problem.goal_samples
    gh_v = g_hat(vstate, problem)
    gt_v = tree.cost_to_come(vid)
    vq = np.asarray(vstate, dtype=float)

    if vid not in ctx.v_exp:
        ctx.v_exp.add(vid)
        cands = list(ctx.x_ncon)
    else:
        cands = [x for x in ctx.x_new if x in ctx.x_ncon]
    if cands:
        scanned += len(cands)
        arr = np.asarray(cands, dtype=float)
        d = np.sqrt(((arr - vq) ** 2).sum(axis=1))
        h = _h_array(arr, goals)
        admit = np.flatnonzero((d <= params.radius) & (gh_v + d + h < ctx.c_sol))
        for i in admit:
            x = cands[i]
            if x != vstate:
                ctx.qe.insert(gt_v + d[i] + h[i], gt_v + d[i], (vid, x, d[i], h[i]))

    if vid not in ctx.v_rewire and ctx.c_sol < math.inf:
        ctx.v_rewire.add(vid)
        ids, mat = tree.states_matrix()
        scanned += len(ids)
        d = np.sqrt(((mat - vq) ** 2).sum(axis=1))
        h = _h_array(mat, goals)
        admit = np.flatnonzero((d <= params.radius) & (gh_v + d + h < ctx.c_sol))
        for i in admit:
            wid = ids[i]
            wstate = tree.state(wid)
            if wstate == vstate or tree.parent(wid) == vid:
                continue
            if gh_v + d[i] < tree.cost_to_come(wid):
                ctx.qe.insert(gt_v + d[i] + h[i], gt_v + d[i], (vid, wstate, d[i], h[i]))
    return scanned


def expand_edge(ctx: PlannerContext, problem: ProblemDef, world) -> None:
    """Pop the best edge and evaluate it against the tree with true costs.

    All admission conditions are re-checked with fresh cost-to-come values,
    which is what makes lazily keyed (possibly stale) queue entries safe. If
    even the best edge cannot beat the incumbent, nothing in either queue
    can, and both are cleared to end the batch.
    """
    _, _, (vid, x, edge, h_x) = ctx.qe.pop_best()
    tree = ctx.tree
    gt_v = tree.cost_to_come(vid)

    if gt_v + edge + h_x >= ctx.c_sol:
        ctx.qe.clear()
        ctx.qv.clear()
        return

    vstate = tree.state(vid)
    if x in ctx.x_ncon:
        cost = world.true_cost(vstate, x)
        if gt_v + cost + h_x < ctx.c_sol:
            del ctx.x_ncon[x]
            new_id = tree.add_child(vid, x, cost)
            g_new = tree.cost_to_come(new_id)
            ctx.qv.insert(g_new + h_x, g_new, new_id)
            if problem.goal_region.contains(x):
                ctx.v_sol.add(new_id)
                _refresh_incumbent(ctx)
    else:
        xid = tree.id_of(x)
        if xid is None:
            raise AssertionError("edge target is neither unconnected nor in the tree")
        if gt_v + edge < tree.cost_to_come(xid):
            cost = world.true_cost(vstate, x)
            if gt_v + cost + h_x < ctx.c_sol:
                if gt_v + cost < tree.cost_to_come(xid):
                    tree.rewire(xid, vid, cost)
                    _refresh_incumbent(ctx)


def _refresh_incumbent(ctx: PlannerContext) -> None:
    # c_sol is a running minimum: pruning may evict the goal vertex that
    # achieved it, and the remaining goal vertices must not push it back up.
    if ctx.v_sol:
        best = min(ctx.tree.cost_to_come(v) for v in ctx.v_sol)
        if best < ctx.c_sol:
            ctx.c_sol = best


def _can_improve(problem: ProblemDef, c_sol: float) -> bool:
    # The informed set is non-empty iff some goal sample is closer to the
    # root than the incumbent cost; otherwise no sample, reuse, or rewire
    # admission test can ever pass again and the planner has converged.
    return any(c_hat(problem.root, g) < c_sol for g in problem.goal_samples)


def plan(problem: ProblemDef, world: World, params: PlannerParams, rng: RngStream, *,
         batch_hook: Callable | None = None,
         prune_hook: Callable | None = None) -> PlanResult:
    """Run BIT* until the stop condition fires; never raises on "no path".

    The result carries the best path ever found (kept as a snapshot, so a
    later prune of its endpoint cannot lose it) and one convergence record
    per strict cost improvement plus one at termination. batch_hook(batch,
    ctx) fires at every batch boundary; prune_hook(ctx) after every prune.
    """
    cw = CountingWorld(world)
    ctx = PlannerContext(tree=Tree(problem.root))
    tree = ctx.tree
    goals = problem.goal_samples
    for g in goals:
        if g != problem.root:
            ctx.x_ncon[g] = None
    ctx.x_new = dict(ctx.x_ncon)
    if problem.goal_region.contains(problem.root):
        ctx.v_sol.add(tree.root_id)
        ctx.c_sol = 0.0
    ctx.qv.insert(h_hat(problem.root, goals), 0.0, tree.root_id)

    stop = params.stop
    records: list[ConvergencePoint] = []
    best_path: list[State] | None = None
    best_cost = math.inf
    batch = 0
    samples_drawn = 0

    def note_improvement():
        nonlocal best_path, best_cost
        best_vid = min(ctx.v_sol, key=lambda v: (tree.cost_to_come(v), v))
        best_cost = ctx.c_sol
        best_path = tree.solution(best_vid)
        records.append(
            ConvergencePoint(cw.elapsed_s(), best_cost, batch, len(tree), samples_drawn)
        )

    if ctx.v_sol:
        note_improvement()

    while True:
        if stop.time_budget_s is not None and cw.elapsed_s() >= stop.time_budget_s:
            break
        if stop.target_cost is not None and ctx.c_sol <= stop.target_cost:
            break
        if not ctx.qv and not ctx.qe:
            if batch_hook is not None:
                batch_hook(batch, ctx)
            if stop.max_batches is not None and batch >= stop.max_batches:
                break
            if not _can_improve(problem, ctx.c_sol):
                break
            start_new_batch(ctx, problem, cw, params, rng, prune_hook=prune_hook)
            batch += 1
            samples_drawn += params.batch_size
        elif ctx.qv.best_value() <= ctx.qe.best_value():
            cw.tick(expand_vertex(ctx, problem, params))
        else:
            before = ctx.c_sol
            expand_edge(ctx, problem, cw)
            if ctx.c_sol < before:
                note_improvement()

    final = ConvergencePoint(cw.elapsed_s(), best_cost, batch, len(tree), samples_drawn)
    if not records or records[-1].elapsed_s != final.elapsed_s:
        records.append(final)
    return PlanResult(path=best_path, cost=best_cost, convergence=records)
