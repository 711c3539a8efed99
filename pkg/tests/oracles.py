"""Independent reference computations used by the tests.

Nothing here calls into the solver code paths; the Laplacian is rebuilt
from pairs and eigenvalues come from a plain dense ``numpy.linalg`` call.
"""

import itertools
import math

import numpy as np
from scipy.optimize import linprog


def laplacian(n, pairs, weights=None):
    L = np.zeros((n, n))
    for k, (u, w) in enumerate(pairs):
        x = 1.0 if weights is None else weights[k]
        L[u, u] += x
        L[w, w] += x
        L[u, w] -= x
        L[w, u] -= x
    return L


def dense_lambda2(L):
    return float(np.sort(np.linalg.eigvalsh(L))[1])


def block_pairs(instance, b):
    return [(int(u), int(w)) for u, w in zip(b.us, b.ws)]


def brute_force(instance):
    """Best joint selection by plain enumeration: ``(value, positions per block)``."""
    per_block = []
    for b in instance.blocks:
        options = []
        for combo in itertools.combinations(range(b.m), b.quota):
            if math.fsum(b.costs[list(combo)]) <= b.budget + 1e-12 * max(1.0, abs(b.budget)):
                options.append(combo)
        per_block.append(options)
    fixed = sorted(instance.fixed_pairs)
    best, arg = -math.inf, None
    for choice in itertools.product(*per_block):
        pairs = list(fixed)
        for b, combo in zip(instance.blocks, choice):
            pairs += [(int(b.us[j]), int(b.ws[j])) for j in combo if b.us[j] != b.ws[j]]
        val = dense_lambda2(laplacian(instance.n, pairs))
        if val > best + 1e-11:
            best, arg = val, choice
    return best, arg


def lp_max(g, costs, quota, budget):
    """max g.x over 0 <= x <= 1, sum x = quota, costs.x <= budget (HiGHS)."""
    m = len(g)
    A_ub = None if not np.isfinite(budget) else np.asarray(costs)[None, :]
    b_ub = None if A_ub is None else [budget]
    res = linprog(-np.asarray(g), A_ub=A_ub, b_ub=b_ub, A_eq=np.ones((1, m)), b_eq=[quota],
                  bounds=[(0, 1)] * m, method="highs")
    assert res.status == 0
    return -res.fun


def sdp_value(instance):
    """RGP optimum as a semidefinite program (needs cvxpy)."""
    import cvxpy as cp

    n = instance.n
    Q = np.linalg.qr(np.column_stack([np.ones(n), np.eye(n)[:, : n - 1]]))[0][:, 1:]
    us, ws, costs, starts, quotas, budgets = instance.concat()
    m = len(us)
    x = cp.Variable(m)
    t = cp.Variable()
    expr = Q.T @ np.asarray(instance.fixed) @ Q
    for j in range(m):
        if us[j] != ws[j]:
            a = np.zeros(n)
            a[us[j]], a[ws[j]] = 1.0, -1.0
            qa = Q.T @ a
            expr = expr + x[j] * np.outer(qa, qa)
    cons = [x >= 0, x <= 1]
    for b in range(len(quotas)):
        sl = slice(starts[b], starts[b + 1])
        cons.append(cp.sum(x[sl]) == quotas[b])
        if np.isfinite(budgets[b]):
            cons.append(costs[sl] @ x[sl] <= budgets[b])
    S = cp.Variable((n - 1, n - 1), symmetric=True)
    cons += [S == (expr + expr.T) / 2, S - t * np.eye(n - 1) >> 0]
    prob = cp.Problem(cp.Maximize(t), cons)
    prob.solve(solver="CLARABEL")
    return float(prob.value)
