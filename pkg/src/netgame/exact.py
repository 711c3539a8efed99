"""Exact best selection by exhaustive enumeration (desk-scale ground truth)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CapacityError, ConstraintError
from .game import ProblemInstance, Strategy, budget_limit

DEFAULT_CAP = 2_000_000
TIE_TOL = 1e-11


@dataclass(frozen=True)
class ExactSolution:
    strategies: tuple[Strategy, ...]
    lambda2: float
    enumerated: int

    @property
    def strategy(self) -> Strategy:
        return self.strategies[0]


def search_size(instance: ProblemInstance) -> int:
    return math.prod(math.comb(b.m, b.quota) for b in instance.blocks)


def positions_to_strategies(instance: ProblemInstance, positions) -> tuple[Strategy, ...]:
    """Split concatenated block positions into one Strategy per block."""
    out, k, offset = [], 0, 0
    for b in instance.blocks:
        chosen = positions[k:k + b.quota]
        out.append(Strategy(b.player, tuple(b.link_ids[j - offset] for j in chosen)))
        k += b.quota
        offset += b.m
    return tuple(out)


def solve_bgp_exact(instance: ProblemInstance, cap: int = DEFAULT_CAP) -> ExactSolution:
    """Maximise lambda2 over every budget-feasible quota subset.

    Among maximisers (within ``1e-11``) the lexicographically smallest
    selection wins, so identical instances give identical answers.

    Raises
    ------
    CapacityError
        If the number of quota subsets exceeds ``cap``.
    ConstraintError
        If no subset fits the budget.
    """
    size = search_size(instance)
    if size > cap:
        raise CapacityError(
            f"exact enumeration needs {size} subsets, cap is {cap}; use the relaxed solver with rounding"
        )
    us, ws, costs, starts, quotas, budgets = instance.concat()
    limits = np.array([budget_limit(float(b)) for b in budgets], dtype=float)
    fixed = np.ascontiguousarray(instance.fixed, dtype=float)
    best, value, count = kernels.best_selection(fixed, us, ws, costs, starts, quotas, limits, TIE_TOL)
    if best is None:
        raise ConstraintError("no budget-feasible selection exists")
    return ExactSolution(positions_to_strategies(instance, best), float(value), int(count))
