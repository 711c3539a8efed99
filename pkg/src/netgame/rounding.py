"""Turn a fractional relaxed solution into a feasible binary selection.

The three schemes differ in how many links they fix per iteration:

* ``greedy`` fixes everything in one pass over the fractional weights;
* ``link-by-link`` fixes one link, then re-solves the relaxation over the
  remaining links;
* ``log-link-by-link`` fixes ``max(1, r // 2)`` links per iteration, ``r``
  being the remaining quota, so it re-solves ``ceil(log2(quota)) + 1``
  times.

A link is accepted only if the quota can still be completed within budget
using the cheapest remaining links, so no scheme can strand the budget.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError
from .game import ProblemInstance, Strategy, within_budget
from .relaxed import FractionalSolution, SolverConfig, solve_rgp
from .spectral import lambda2 as spectral_lambda2


class RoundingScheme(str, enum.Enum):
    GREEDY = "greedy"
    LINK_BY_LINK = "link-by-link"
    LOG_LINK_BY_LINK = "log-link-by-link"

    @classmethod
    def parse(cls, name: str) -> "RoundingScheme":
        aliases = {"lbl": cls.LINK_BY_LINK, "loglbl": cls.LOG_LINK_BY_LINK,
                   "log-lbl": cls.LOG_LINK_BY_LINK}
        key = name.strip().lower()
        return aliases[key] if key in aliases else cls(key)


@dataclass(frozen=True)
class RoundedSolution:
    strategies: tuple[Strategy, ...]
    lambda2: float
    resolves: int

    @property
    def strategy(self) -> Strategy:
        return self.strategies[0]


def _completable(costs, budget, avail, j, need) -> bool:
    """Can ``j`` plus the ``need - 1`` cheapest of ``avail`` (without ``j``) fit ``budget``?"""
    rest = sorted(costs[k] for k in avail if k != j)[: need - 1]
    return within_budget(math.fsum([costs[j]] + rest), budget)


def _order(instance: ProblemInstance, frac: FractionalSolution):
    """All (block, position) pairs by descending weight, ties by lower link id."""
    items = []
    for bi, b in enumerate(instance.blocks):
        for j, lid in enumerate(b.link_ids):
            items.append((-frac.weights[lid], lid, bi, j))
    items.sort()
    return [(bi, j) for _, _, bi, j in items]


def _greedy(instance, frac):
    chosen = {bi: [] for bi in range(len(instance.blocks))}
    for bi, b in enumerate(instance.blocks):
        need, budget = b.quota, b.budget
        unscanned = set(range(b.m))
        for bj, j in _order(instance, frac):
            if bj != bi or need == 0:
                continue
            unscanned.discard(j)
            if _completable(b.costs, budget, unscanned | {j}, j, need):
                chosen[bi].append(j)
                budget -= b.costs[j]
                need -= 1
        if need:
            raise ConstraintError(f"player {b.player}: greedy rounding could not complete the quota")
    return chosen


def _fix_batch(instance, frac, count):
    """Pick ``count`` links to fix, highest weight first, per-block acceptance test."""
    need = [b.quota for b in instance.blocks]
    budget = [b.budget for b in instance.blocks]
    avail = [set(range(b.m)) for b in instance.blocks]
    fix = {}
    for bi, j in _order(instance, frac):
        if count == 0:
            break
        b = instance.blocks[bi]
        if need[bi] == 0 or not _completable(b.costs, budget[bi], avail[bi], j, need[bi]):
            continue
        fix.setdefault(bi, []).append(j)
        avail[bi].discard(j)
        budget[bi] -= b.costs[j]
        need[bi] -= 1
        count -= 1
    if count:
        raise ConstraintError("rounding could not find an admissible link to fix")
    return fix


def round_solution(frac: FractionalSolution, instance: ProblemInstance,
                   scheme: RoundingScheme | str, config: SolverConfig | None = None) -> RoundedSolution:
    """Round ``frac`` to a binary selection satisfying every block's quota and budget."""
    scheme = RoundingScheme.parse(scheme) if isinstance(scheme, str) else scheme
    picked = {bi: [] for bi in range(len(instance.blocks))}
    resolves = 0
    if scheme is RoundingScheme.GREEDY:
        for bi, js in _greedy(instance, frac).items():
            picked[bi] = [instance.blocks[bi].link_ids[j] for j in js]
    else:
        current, current_frac = instance, frac
        while sum(b.quota for b in current.blocks):
            remaining = sum(b.quota for b in current.blocks)
            count = 1 if scheme is RoundingScheme.LINK_BY_LINK else max(1, remaining // 2)
            fix = _fix_batch(current, current_frac, count)
            for bi, js in fix.items():
                picked[bi].extend(current.blocks[bi].link_ids[j] for j in js)
            current = current.restrict(fix)
            current_frac = solve_rgp(current, config)
            resolves += 1

    strategies = tuple(Strategy(b.player, tuple(picked[bi])) for bi, b in enumerate(instance.blocks))
    x = np.array([1.0 if lid in set(picked[bi]) else 0.0
                  for bi, b in enumerate(instance.blocks) for lid in b.link_ids])
    for bi, b in enumerate(instance.blocks):
        sel = [j for j, lid in enumerate(b.link_ids) if lid in set(picked[bi])]
        assert len(sel) == b.quota, "rounding broke the quota"
        assert within_budget(math.fsum(b.costs[sel]), b.budget), "rounding broke the budget"
    value = spectral_lambda2(instance.laplacian(x)).lambda2
    return RoundedSolution(strategies, value, resolves)
