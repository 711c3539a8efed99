"""Relaxed selection problem: maximise lambda2 over fractional link weights.

lambda2 is concave in the weights (a minimum of linear functions
``v^T L(w) v`` over unit ``v`` orthogonal to ``1``), and the feasible set,
``0 <= w <= 1``, ``sum w = quota``, ``cost . w <= budget`` per block, is a
polytope.  Frank-Wolfe with the Fiedler supergradient and an exact
golden-section line search ascends toward the global optimum.  Any
eigenvector ``v`` orthogonal to ``1`` gives a global linear majorant
``v^T L(x) v``, so both the Frank-Wolfe gap and the cutting-plane bound are
certified upper bounds on the remaining suboptimality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.optimize import linprog

from . import kernels
from .errors import ConstraintError, DomainError, NumericalError
from .game import ProblemInstance, within_budget
from .spectral import lambda2 as spectral_lambda2
from .spectral import pair_supergradient


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-6
    max_iterations: int = 2000
    line_search_tolerance: float = 1e-8
    method: str = "cutting-plane"
    cluster_width: float = 1e-3
    max_cuts_per_point: int = 8


@dataclass(frozen=True)
class FractionalSolution:
    """Weights of the owned links plus convergence diagnostics.

    ``vector`` is the weight array in block-concatenated order;
    ``weights`` maps catalog link id to the same values.
    """

    weights: dict
    vector: np.ndarray
    lambda2: float
    iterations: int
    converged: bool
    duality_gap_estimate: float
    upper_bound: float
    history: list = field(default_factory=list, repr=False)

    @classmethod
    def from_weights(cls, weights: dict, instance: ProblemInstance) -> "FractionalSolution":
        """Rebuild a stored solution; diagnostics other than lambda2 are not recoverable."""
        ids = [i for b in instance.blocks for i in b.link_ids]
        if set(weights) != set(ids):
            raise ConstraintError("stored weights do not cover exactly the owned links of the problem")
        w = np.array([weights[i] for i in ids], dtype=float)
        if np.any(w < -1e-9) or np.any(w > 1 + 1e-9):
            raise DomainError("stored weights must lie in [0, 1]")
        _check_point(instance, w)
        f = kernels.weighted_lambda2(instance.fixed, *instance.concat()[:2], w)
        return _finish(instance, w, f, 0, True, 0.0, math.nan, [])


def _block_order(g, c, mu):
    # descending reduced score, then cheaper, then lower index
    idx = np.arange(len(g))
    return np.lexsort((idx, c, -(g - mu * c)))


def block_lmo(g: np.ndarray, costs: np.ndarray, quota: int, budget: float) -> np.ndarray:
    """Maximise ``g . w`` over ``{0<=w<=1, sum w = quota, costs . w <= budget}``.

    Without a binding budget the answer is the indicator of the ``quota``
    largest entries of ``g`` (ties: cheaper, then lower index).  Otherwise
    the budget multiplier is located by bisection over the breakpoints
    where two items swap order, and the optimal vertex is the blend of one
    swap that makes the budget tight.
    """
    g = np.asarray(g, dtype=float)
    c = np.asarray(costs, dtype=float)
    m = len(g)
    x = np.zeros(m)
    if quota == 0:
        return x
    if quota == m:
        x[:] = 1.0
        return x

    def select(mu):
        return np.sort(_block_order(g, c, mu)[:quota])

    def cost_of(sel):
        return math.fsum(c[sel])

    s0 = select(0.0)
    if within_budget(cost_of(s0), budget):
        x[s0] = 1.0
        return x
    cheapest = np.sort(np.lexsort((np.arange(m), c))[:quota])
    if not within_budget(cost_of(cheapest), budget):
        raise ConstraintError("no selection fits the budget")

    dg = g[:, None] - g[None, :]
    dc = c[:, None] - c[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        mus = np.where(dc != 0.0, dg / dc, np.nan)
    mus = np.unique(mus[np.isfinite(mus) & (mus > 0.0)])
    # interval t lies between mus[t-1] and mus[t]; interval len(mus) is beyond the last
    def probe(t):
        if t == 0:
            return 0.5 * mus[0] if len(mus) else 1.0
        if t == len(mus):
            return 2.0 * mus[-1] + 1.0
        return 0.5 * (mus[t - 1] + mus[t])

    lo, hi = 0, len(mus)
    while lo < hi:
        mid = (lo + hi) // 2
        if within_budget(cost_of(select(probe(mid))), budget):
            hi = mid
        else:
            lo = mid + 1
    s_hi = select(probe(lo))
    if lo == 0:
        x[s_hi] = 1.0
        return x
    s_lo = select(probe(lo - 1))
    ins = sorted(set(s_lo.tolist()) - set(s_hi.tolist()), key=lambda j: (-c[j], j))
    outs = sorted(set(s_hi.tolist()) - set(s_lo.tolist()), key=lambda j: (c[j], j))
    x[s_hi] = 1.0
    spent = cost_of(s_hi)
    for j_in, j_out in zip(ins, outs):
        delta = c[j_in] - c[j_out]
        if spent + delta > budget:
            theta = (budget - spent) / delta
            x[j_in] += theta
            x[j_out] -= theta
            return x
        x[j_in] = 1.0
        x[j_out] = 0.0
        spent += delta
    return x


def _as_vector(instance: ProblemInstance, values) -> np.ndarray:
    if isinstance(values, Mapping):
        return np.array([float(values[i]) for b in instance.blocks for i in b.link_ids])
    return np.asarray(values, dtype=float)


def linear_subproblem(gradient, instance: ProblemInstance) -> np.ndarray:
    """Frank-Wolfe direction: one LP vertex per block, concatenated."""
    g = _as_vector(instance, gradient)
    if not np.all(np.isfinite(g)):
        raise ValueError("gradient must be finite")
    out, k = [], 0
    for b in instance.blocks:
        out.append(block_lmo(g[k:k + b.m], b.costs, b.quota, b.budget))
        k += b.m
    return np.concatenate(out) if out else np.zeros(0)


def initial_point(instance: ProblemInstance) -> np.ndarray:
    """Uniform ``quota/m`` per block, pulled toward the min-cost vertex until within budget."""
    parts = []
    for b in instance.blocks:
        if b.m == 0:
            parts.append(np.zeros(0))
            continue
        u = np.full(b.m, b.quota / b.m)
        spent = float(b.costs @ u)
        if spent > b.budget:
            v = block_lmo(np.zeros(b.m), b.costs, b.quota, b.budget)
            cv = float(b.costs @ v)
            t = 1.0 if spent == cv else min(1.0, (spent - b.budget) / (spent - cv))
            u = (1.0 - t) * u + t * v
        parts.append(u)
    return np.concatenate(parts) if parts else np.zeros(0)


def _check_feasible(instance: ProblemInstance):
    for b in instance.blocks:
        if b.quota < 0 or b.quota > b.m:
            raise ConstraintError(f"player {b.player}: quota {b.quota} outside [0, {b.m}]")
        if not within_budget(math.fsum(np.sort(b.costs)[: b.quota]), b.budget):
            raise ConstraintError(f"player {b.player}: no selection fits the budget")


def _check_point(instance: ProblemInstance, w: np.ndarray, tol: float = 1e-6):
    k = 0
    for b in instance.blocks:
        x = w[k: k + b.m]
        k += b.m
        if abs(x.sum() - b.quota) > tol:
            raise ConstraintError(f"player {b.player}: weights sum to {x.sum():.6f}, quota is {b.quota}")
        if not within_budget(float(b.costs @ x), b.budget + tol):
            raise ConstraintError(f"player {b.player}: weights exceed the budget")


def _lp_template(instance: ProblemInstance):
    us, ws, costs, starts, quotas, budgets = instance.concat()
    m = len(us)
    A_eq = np.zeros((len(quotas), m + 1))
    rows, rhs = [], []
    for b in range(len(quotas)):
        A_eq[b, starts[b]:starts[b + 1]] = 1.0
        if np.isfinite(budgets[b]):
            row = np.zeros(m + 1)
            row[starts[b]:starts[b + 1]] = costs[starts[b]:starts[b + 1]]
            rows.append(row)
            rhs.append(float(budgets[b]))
    return A_eq, quotas.astype(float), rows, rhs


def _repair(instance: ProblemInstance, x: np.ndarray) -> np.ndarray:
    """Remove LP round-off so every block sums exactly to its quota."""
    x = np.clip(x, 0.0, 1.0)
    k = 0
    for b in instance.blocks:
        seg = x[k:k + b.m]
        r = b.quota - seg.sum()
        order = np.lexsort((np.arange(b.m), b.costs if r > 0 else -b.costs))
        for j in order:
            if abs(r) <= 0.0:
                break
            room = 1.0 - seg[j] if r > 0 else -seg[j]
            step = min(r, room) if r > 0 else max(r, room)
            seg[j] += step
            r -= step
        k += b.m
    return x


class _CutModel:
    """Outer approximation ``t <= v^T L(x) v`` of lambda2 over the polytope.

    Each cut is exact and global because ``v^T L(x) v`` is linear in ``x``
    and lambda2 is its minimum over unit ``v`` orthogonal to ``1``.
    """

    options = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}

    def __init__(self, instance: ProblemInstance, width: float, max_per_point: int):
        self.instance = instance
        us, ws, *_ = instance.concat()
        self.us, self.ws = us.astype(np.intp), ws.astype(np.intp)
        self.m = len(us)
        self.A_eq, self.b_eq, self.rows, self.rhs = _lp_template(instance)
        self.n_fixed_rows = len(self.rows)
        self.width = width
        self.max_per_point = max_per_point
        self.objective = np.zeros(self.m + 1)
        self.objective[-1] = -1.0
        self.bounds = [(0.0, 1.0)] * self.m + [(None, None)]

    def add(self, res) -> None:
        vals = res.eigenvalues[1:]
        r = int(np.searchsorted(vals, res.lambda2 + self.width * max(1.0, res.lambda2), side="right"))
        for j in range(max(1, min(r, self.max_per_point))):
            v = res.vectors[:, j]
            g = pair_supergradient(v, self.us, self.ws)
            self.rows.append(np.concatenate([-g, [1.0]]))
            self.rhs.append(float(v @ self.instance.fixed @ v))

    def maximise(self):
        lp = linprog(self.objective, A_ub=np.array(self.rows), b_ub=np.array(self.rhs),
                     A_eq=self.A_eq, b_eq=self.b_eq, bounds=self.bounds, method="highs",
                     options=self.options)
        if lp.status != 0:
            raise NumericalError(f"cutting-plane LP failed: {lp.message}")
        return _repair(self.instance, lp.x[: self.m]), -float(lp.fun)


def _finish(instance, w, f, it, converged, gap, upper, history):
    weights = {}
    k = 0
    for b in instance.blocks:
        for j, i in enumerate(b.link_ids):
            weights[i] = float(w[k + j])
        k += b.m
    return FractionalSolution(weights, w, float(f), it, converged, max(float(gap), 0.0),
                              float(upper), history)


def solve_rgp(instance: ProblemInstance, config: SolverConfig | None = None) -> FractionalSolution:
    """Maximise lambda2 over the relaxed feasible set.

    The default ``cutting-plane`` method is a conditional-gradient ascent
    whose linear model is the minimum of every eigenvector cut collected so
    far, rather than the single current supergradient: the LP maximiser of
    that model is the search target, a golden-section line search picks the
    step, and the LP value is a certified upper bound.  With a single cut
    the target is exactly :func:`linear_subproblem`'s vertex.  The model
    keeps track of all supergradients at a repeated lambda2, which is where
    the single-cut method stalls.

    ``converged`` is true iff ``upper_bound - lambda2 <= config.tolerance``
    within ``config.max_iterations``; ``duality_gap_estimate`` is that
    difference.  ``method="frank-wolfe"`` runs classic pairwise Frank-Wolfe
    with the single-cut gap instead.
    """
    config = config or SolverConfig()
    _check_feasible(instance)
    if config.method == "frank-wolfe":
        return _solve_frank_wolfe(instance, config)
    if config.method != "cutting-plane":
        raise ValueError(f"unknown RGP method {config.method!r}")
    us, ws, *_ = instance.concat()
    fixed = np.ascontiguousarray(instance.fixed, dtype=float)
    model = _CutModel(instance, config.cluster_width, config.max_cuts_per_point)

    w = initial_point(instance)
    res = spectral_lambda2(instance.laplacian(w))
    f = res.lambda2
    history = [f]
    if all(b.quota in (0, b.m) for b in instance.blocks):
        return _finish(instance, w, f, 0, True, 0.0, f, history)
    model.add(res)
    upper, gap, converged, it = math.inf, math.inf, False, 0
    while it < config.max_iterations:
        target, bound = model.maximise()
        upper = min(upper, bound)
        gap = upper - f
        if gap <= config.tolerance:
            converged = True
            break
        it += 1
        model.add(spectral_lambda2(instance.laplacian(target)))
        t, ft = kernels.golden_line_search(fixed, us, ws, w, target - w, 1.0, f,
                                           config.line_search_tolerance)
        if t > 0.0 and ft > f:
            w = np.clip(w + t * (target - w), 0.0, 1.0)
            res = spectral_lambda2(instance.laplacian(w))
            f = max(f, res.lambda2)
            model.add(res)
        history.append(f)
    else:
        target, bound = model.maximise()
        upper = min(upper, bound)
        gap = upper - f
        converged = gap <= config.tolerance
    return _finish(instance, w, f, it, converged, gap, upper, history)


def _solve_frank_wolfe(instance: ProblemInstance, config: SolverConfig) -> FractionalSolution:
    """Pairwise Frank-Wolfe with the Fiedler supergradient.

    Stops unconverged when neither the pairwise nor the plain step improves,
    which happens at kinks where lambda2 is repeated.
    """
    us, ws, *_ = instance.concat()
    fixed = np.ascontiguousarray(instance.fixed, dtype=float)
    ius, iws = us.astype(np.intp), ws.astype(np.intp)
    tol_ls = config.line_search_tolerance

    w = initial_point(instance)
    atoms, alphas = [w.copy()], [1.0]
    history = []
    upper, gap, converged, it = math.inf, 0.0, False, 0
    while True:
        res = spectral_lambda2(instance.laplacian(w))
        f = res.lambda2
        history.append(f)
        if instance.m == 0:
            converged, upper = True, f
            break
        g = pair_supergradient(res.fiedler, ius, iws)
        s = linear_subproblem(g, instance)
        gap = max(float(g @ (s - w)), 0.0)
        upper = min(upper, f + gap)
        if gap <= config.tolerance:
            converged = True
            break
        if it >= config.max_iterations:
            break
        it += 1
        k = int(np.argmin([float(g @ a) for a in atoms]))
        t, ft = kernels.golden_line_search(fixed, us, ws, w, s - atoms[k], alphas[k], f, tol_ls)
        if t > 0.0 and ft > f:
            alphas[k] -= t
            _add_atom(atoms, alphas, s, t)
            if alphas[k] <= 1e-14 * max(1.0, t):
                del atoms[k], alphas[k]
        else:
            t, ft = kernels.golden_line_search(fixed, us, ws, w, s - w, 1.0, f, tol_ls)
            if not (t > 0.0 and ft > f):
                break
            alphas = [a * (1.0 - t) for a in alphas]
            _add_atom(atoms, alphas, s, t)
        w = np.clip(sum(a * x for a, x in zip(alphas, atoms)), 0.0, 1.0)
    return _finish(instance, w, history[-1], it, converged, gap, upper, history)


def _add_atom(atoms, alphas, s, t):
    for j, a in enumerate(atoms):
        if np.array_equal(a, s):
            alphas[j] += t
            return
    atoms.append(s.copy())
    alphas.append(t)
