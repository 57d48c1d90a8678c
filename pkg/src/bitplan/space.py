"""State space primitives: heuristics, informed-set membership, and batch sampling.

States are plain tuples of floats so they can live in sets and dicts. All
cost heuristics are Euclidean and therefore admissible lower bounds on the
true (collision-checked) edge cost.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

State = tuple[float, ...]

# Give up on one sample after this many consecutive rejections.
REJECTION_BUDGET = 100_000


class SamplerStarvedError(RuntimeError):
    """Raised when rejection sampling cannot find an acceptable state."""


@dataclass(frozen=True)
class Box:
    """Axis-aligned box, closed on all faces."""

    lo: State
    hi: State

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("box corners must have the same dimension")
        if not all(l < h for l, h in zip(self.lo, self.hi)):
            raise ValueError("box must satisfy lo < hi componentwise")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def contains(self, x: State) -> bool:
        return len(x) == self.dim and all(
            l <= a <= h for a, l, h in zip(x, self.lo, self.hi)
        )


@dataclass(frozen=True)
class GoalRegion:
    """Disc-shaped target set: all states within `radius` of `center`."""

    center: State
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("goal radius must be positive")

    def contains(self, x: State) -> bool:
        return c_hat(x, self.center) <= self.radius


@dataclass(frozen=True)
class ProblemDef:
    """A planning query: start state, goal samples, goal region, and bounds."""

    root: State
    goal_samples: tuple[State, ...]
    goal_region: GoalRegion
    bounds: Box

    def __post_init__(self):
        if not self.goal_samples:
            raise ValueError("at least one goal sample is required")

    def validate(self, world) -> None:
        """Check start/goal placement against bounds, obstacles, and the region."""
        if not self.bounds.contains(self.root):
            raise ValueError("root lies outside the planning bounds")
        if not world.is_free(self.root):
            raise ValueError("root lies inside an obstacle")
        for g in self.goal_samples:
            if not self.bounds.contains(g):
                raise ValueError("goal sample lies outside the planning bounds")
            if not world.is_free(g):
                raise ValueError("goal sample lies inside an obstacle")
            if not self.goal_region.contains(g):
                raise ValueError("goal sample lies outside the goal region")


class RngStream:
    """Seeded random stream; one stream per planner run keeps runs reproducible.

    The same seed always yields the same sample sequence (bit-exact on one
    build), which is what makes whole benchmark runs byte-reproducible.
    """

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError("seed must be a non-negative integer")
        self.seed = seed
        self._rng = random.Random(seed)

    def uniform(self, lo: float, hi: float) -> float:
        return self._rng.uniform(lo, hi)

    def point(self, bounds: Box) -> State:
        return tuple(self.uniform(l, h) for l, h in zip(bounds.lo, bounds.hi))


def c_hat(x: State, y: State) -> float:
    """Euclidean edge-cost heuristic ||x - y||; a lower bound on true cost."""
    if len(x) == 2 and len(y) == 2:  # hot path for the planar scenarios
        return math.hypot(x[0] - y[0], x[1] - y[1])
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(x, y)))


def g_hat(x: State, problem: ProblemDef) -> float:
    """Heuristic cost-to-come: straight-line distance from the root."""
    return c_hat(problem.root, x)


def h_hat(x: State, goal_samples: tuple[State, ...]) -> float:
    """Heuristic cost-to-go: distance to the nearest goal sample.

    Defined as a minimum over all goal samples at all times, so it is an
    admissible cost-to-go bound both before and after the first solution.
    """
    if not goal_samples:
        raise ValueError("goal sample set is empty")
    if len(goal_samples) == 1:
        return c_hat(x, goal_samples[0])
    return min(c_hat(x, g) for g in goal_samples)


def informed_contains(x: State, problem: ProblemDef, c_sol: float) -> bool:
    """True iff x could lie on a solution shorter than the incumbent.

    Membership is the strict ellipse test g_hat + h_hat < c_sol; with no
    incumbent (c_sol = inf) every state qualifies.
    """
    if math.isinf(c_sol):
        return True
    return g_hat(x, problem) + h_hat(x, problem.goal_samples) < c_sol


def sample_batch(m: int, problem: ProblemDef, world, c_sol: float, rng: RngStream) -> list[State]:
    """Draw m i.i.d. uniform samples of the free space inside the informed set.

    Rejection sampling from the uniform distribution over the bounds keeps the
    accepted samples exactly uniform on (free space) intersect (informed set).
    Raises SamplerStarvedError if one sample exhausts the rejection budget.
    """
    if m < 1:
        raise ValueError("batch size must be at least 1")
    out: list[State] = []
    attempts = 0
    for _ in range(m):
        for _ in range(REJECTION_BUDGET):
            attempts += 1
            x = rng.point(problem.bounds)
            if world.is_free(x) and informed_contains(x, problem, c_sol):
                out.append(x)
                break
        else:
            rate = len(out) / attempts
            raise SamplerStarvedError(
                f"no acceptable sample in {REJECTION_BUDGET} consecutive draws "
                f"(acceptance rate estimate {rate:.3g}); the informed set is "
                f"empty or vanishingly small"
            )
    return out
