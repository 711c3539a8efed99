"""Pure-numpy implementations of the hot loops.

Used when the compiled extension is unavailable, or forced with
``NETGAME_PURE_PYTHON=1``.  Results match :mod:`netgame._kernels`: same
enumeration order, same budget arithmetic, same tie rule.
"""

from __future__ import annotations

import itertools

import numpy as np

CLAMP_TOL = 1e-10
CHUNK = 4096


def _clamp(lam):
    return np.where((lam < 0.0) & (lam > -CLAMP_TOL), 0.0, lam)


def _edge_stack(n, us, ws):
    E = np.zeros((len(us), n, n))
    for j, (u, w) in enumerate(zip(us, ws)):
        if u != w:
            E[j, u, u] = E[j, w, w] = 1.0
            E[j, u, w] = E[j, w, u] = -1.0
    return E


def _feasible_combos(costs, start, stop, q, limit):
    rows = []
    for combo in itertools.combinations(range(start, stop), q):
        total = 0.0
        ok = True
        for j in combo:
            total = total + costs[j]
            if total > limit:
                ok = False
                break
        if ok:
            rows.append(combo)
    return rows


def best_selection(fixed, us, ws, costs, starts, quotas, limits, tie_tol):
    """Enumerate every budget-feasible selection and keep the lambda2 maximiser.

    Selections are visited in lexicographic order of their concatenated
    block positions; a later selection replaces the incumbent only if it
    beats it by more than ``tie_tol``.

    Returns
    -------
    best : tuple of int or None
        Concatenated block positions of the maximiser, ``None`` if nothing is
        feasible.
    value : float
        Its lambda2.
    count : int
        Number of feasible selections evaluated.
    """
    fixed = np.asarray(fixed, dtype=float)
    n = fixed.shape[0]
    E = _edge_stack(n, us, ws)
    per_block = [
        _feasible_combos(costs, int(starts[b]), int(starts[b + 1]), int(quotas[b]), float(limits[b]))
        for b in range(len(quotas))
    ]
    if any(len(rows) == 0 for rows in per_block):
        return None, float("nan"), 0
    best, best_val, count = None, -1.0, 0
    stream = (sum(parts, ()) for parts in itertools.product(*per_block))
    total_q = int(np.sum(quotas))
    while True:
        chunk = list(itertools.islice(stream, CHUNK))
        if not chunk:
            break
        count += len(chunk)
        if total_q:
            idx = np.array(chunk, dtype=np.intp)
            L = fixed[None, :, :] + E[idx].sum(axis=1)
        else:
            L = fixed[None, :, :]
        lam = _clamp(np.linalg.eigvalsh(L)[:, 1])
        while True:
            hits = np.flatnonzero(lam > best_val + tie_tol)
            if hits.size == 0:
                break
            i = int(hits[0])
            best_val = float(lam[i])
            best = tuple(int(j) for j in chunk[i])
            lam = lam.copy()
            lam[: i + 1] = -np.inf
    return best, best_val, count


def weighted_lambda2(fixed, us, ws, weights):
    L = np.array(fixed, dtype=float)
    for u, w, x in zip(us, ws, weights):
        if u != w and x != 0.0:
            L[u, u] += x
            L[w, w] += x
            L[u, w] -= x
            L[w, u] -= x
    return float(_clamp(np.linalg.eigvalsh(L)[1]))


GOLDEN = 0.6180339887498949


def golden_line_search(fixed, us, ws, w, d, tmax, f0, tol):
    """Maximise the concave slice ``t -> lambda2(w + t d)`` on ``[0, tmax]``.

    Golden-section search until the bracket is below ``tol * tmax``.  The
    endpoints are included, and the result is the best point evaluated, so
    the returned value is never below ``f0`` (the value at ``t = 0``).
    """
    if len(us) == 0:
        return 0.0, f0

    def phi(t):
        return weighted_lambda2(fixed, us, ws, w + t * d)

    f1 = phi(tmax)
    best_t, best_f = (tmax, f1) if f1 > f0 else (0.0, f0)
    a, b = 0.0, tmax
    x1, x2 = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
    p1, p2 = phi(x1), phi(x2)
    while b - a > tol * tmax:
        if p1 < p2:
            a, x1, p1 = x1, x2, p2
            x2 = a + GOLDEN * (b - a)
            p2 = phi(x2)
        else:
            b, x2, p2 = x2, x1, p1
            x1 = b - GOLDEN * (b - a)
            p1 = phi(x1)
    for t, f in ((x1, p1), (x2, p2)):
        if f > best_f:
            best_t, best_f = t, f
    return best_t, best_f
