"""Brute-force verification by exhaustive grid search.

Evaluates any of the supported objectives on every point of a rectangular
power grid (optionally filtered by a total-power budget) and returns the best
point. Deliberately simple so it can serve as an independent check on the
closed-form and iterative solvers; ties break toward the lexicographically
smallest power vector and the result is independent of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError
from .allocator import Allocation

OBJECTIVES = ("ee_siso", "gee", "wsee", "wpee", "wmee", "sumrate")

_MAX_POINTS = 10**8


@dataclass(frozen=True)
class GridSpec:
    """Per-dimension power grid: steps equally spaced points on [p_min, p_max]."""

    p_min: float
    p_max: float
    steps: int

    def __post_init__(self) -> None:
        if not self.p_min >= 0.0:
            raise ValueError(f"p_min must be >= 0, got {self.p_min}")
        if not self.p_max > self.p_min:
            raise ValueError(f"need p_max > p_min, got [{self.p_min}, {self.p_max}]")
        if self.steps < 2:
            raise ValueError(f"steps must be >= 2, got {self.steps}")

    @property
    def step(self) -> float:
        return (self.p_max - self.p_min) / (self.steps - 1)

    def axis(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.steps)


def grid_argmax(objective: str, gains, cfgs, grid: GridSpec, budget: float | None = None) -> Allocation:
    """Best grid point for the named objective.

    budget, when given, keeps only points whose summed power is at most the
    budget. Dimensions above 1 are capped at 3 (grid search only). For "gee"
    the shared circuit power is taken from the first config.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}; expected one of {OBJECTIVES}")
    g = np.asarray(gains, dtype=float)
    cfgs = list(cfgs)
    n = g.size
    if n != len(cfgs):
        raise ValueError(f"got {n} gains but {len(cfgs)} configs")
    if objective == "ee_siso" and n != 1:
        raise ValueError("ee_siso is a single-dimension objective")
    if n > 3:
        raise ValueError(f"grid search supports at most 3 dimensions, got {n}")
    if grid.steps**n > _MAX_POINTS:
        raise ValueError(f"grid too large: {grid.steps}**{n} points exceeds {_MAX_POINTS}")

    axis = grid.axis()
    pc = np.array([c.pc for c in cfgs])
    w = np.array([c.weight for c in cfgs])
    budget_slack = None if budget is None else budget + 1e-12 * (1.0 + abs(budget))

    if n == 1:
        mesh = axis[:, None]
        value = _objective_values(objective, g, pc, w, [mesh[:, 0]])
        if budget_slack is not None:
            value = np.where(mesh[:, 0] <= budget_slack, value, -np.inf)
        best = int(np.argmax(value))
        if value[best] == -np.inf:
            raise InfeasibleError("no grid point satisfies the budget")
        return Allocation(np.array([axis[best]]), float(value[best]))

    # chunk over the first axis so memory stays at steps^(n-1) per evaluation
    tail = np.meshgrid(*([axis] * (n - 1)), indexing="ij")
    tail = [t.ravel() for t in tail]
    tail_sum = np.zeros_like(tail[0])
    for t in tail:
        tail_sum = tail_sum + t
    best_val = -np.inf
    best_idx = (0, 0)
    for i, p0 in enumerate(axis):
        coords = [np.full_like(tail[0], p0)] + tail
        value = _objective_values(objective, g, pc, w, coords)
        if budget_slack is not None:
            value = np.where(p0 + tail_sum <= budget_slack, value, -np.inf)
        j = int(np.argmax(value))
        if value[j] > best_val:
            best_val = float(value[j])
            best_idx = (i, j)
    if best_val == -np.inf:
        raise InfeasibleError("no grid point satisfies the budget")
    i, j = best_idx
    powers = np.array([axis[i]] + [t[j] for t in tail])
    return Allocation(powers, best_val)


def _objective_values(objective, g, pc, w, coords):
    se = [np.log1p(g[i] * coords[i]) for i in range(len(coords))]
    if objective == "sumrate":
        return sum(se)
    if objective == "gee":
        total = pc[0] + sum(coords)
        return sum(se) / total
    ee = [w[i] * se[i] / (pc[i] + coords[i]) for i in range(len(coords))]
    if objective in ("ee_siso", "wsee"):
        return sum(ee)
    if objective == "wpee":
        out = ee[0]
        for v in ee[1:]:
            out = out * v
        return out
    # wmee
    out = ee[0]
    for v in ee[1:]:
        out = np.minimum(out, v)
    return out
