"""Generators for the shipped instance families.

All generators return plain instance dictionaries (the on-disk format, see
:mod:`netgame.files`), so every generated instance can be written out and
re-run from the file alone.
"""

from __future__ import annotations

import itertools
import math

SCHEMA = "netgame-instance/1"


def grown_model(n1: int, n2: int, quotas=(None, None), budgets=(None, None), cost: float = 1.0,
                base: str = "none", name: str | None = None) -> dict:
    """Two subnetworks of ``n1`` and ``n2`` nodes with uniform-cost candidate links.

    Candidates are all within-network pairs plus all cross pairs.  Cross
    pairs are listed in lexicographic order and owned alternately by player
    1 (even position) and player 2 (odd position).  ``base="spine"`` adds a
    path through each subnetwork and one cross link ``(0, n1)`` as fixed
    links (removed from the candidates), which keeps every point connected.
    ``None`` quotas mean "own everything"; ``None`` budgets are unlimited.
    """
    nodes = [{"id": v, "side": 1 if v < n1 else 2} for v in range(n1 + n2)]
    g1 = list(range(n1))
    g2 = list(range(n1, n1 + n2))
    fixed = set()
    if base == "spine":
        fixed |= {(a, a + 1) for a in g1[:-1]} | {(a, a + 1) for a in g2[:-1]} | {(0, n1)}
    elif base != "none":
        raise ValueError(f"unknown base {base!r}")
    within1 = [p for p in itertools.combinations(g1, 2) if p not in fixed]
    within2 = [p for p in itertools.combinations(g2, 2) if p not in fixed]
    cross = [(u, w) for u in g1 for w in g2]
    owners = {p: 1 + (i % 2) for i, p in enumerate(cross)}
    cross = [p for p in cross if p not in fixed]
    cands = [(p, 1) for p in within1] + [(p, 2) for p in within2] + [(p, owners[p]) for p in cross]
    cands.sort()
    links = [{"id": i, "u": u, "w": w, "owner": o, "cost": cost} for i, ((u, w), o) in enumerate(cands)]
    owned = [sum(1 for c in links if c["owner"] == p) for p in (1, 2)]
    players = [
        {"id": p, "budget": budgets[p - 1], "quota": owned[p - 1] if quotas[p - 1] is None else quotas[p - 1]}
        for p in (1, 2)
    ]
    return {
        "schema": SCHEMA,
        "name": name or f"grown_{n1}x{n2}",
        "description": (
            f"{n1}+{n2} nodes, uniform link cost {cost:g}, all within and cross pairs as candidates, "
            f"cross ownership alternating by index parity, base={base}"
        ),
        "nodes": nodes,
        "base_links": [list(p) for p in sorted(fixed)],
        "candidate_links": links,
        "players": players,
    }


PSN_POSITIONS = {
    0: (0.0, 0.0), 1: (1.1, 0.3), 2: (2.0, 0.0), 3: (1.4, 1.3), 4: (0.2, 1.1),
    5: (3.3, 0.2), 6: (4.2, 0.9), 7: (3.5, 1.7), 8: (2.7, 1.1),
}

PSN_BASE = [
    (0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3), (1, 4),
    (5, 6), (6, 7), (7, 8), (5, 8), (6, 8),
    (2, 5), (2, 8), (3, 8), (3, 7),
]

# cross lines built by network A; the remaining cross lines belong to B
PSN_A_CROSS = {(0, 5), (0, 7), (1, 5), (1, 7), (2, 6), (3, 5), (4, 7)}


def psn_model(quotas=(6, 4), budget_slack: float = 0.25) -> dict:
    """Representative 5+4 substation network (our own data, not a published case).

    Substations 0-4 form network A (player 1) and 5-8 network B (player 2).
    The 16 existing lines are fixed; the 20 missing pairs are candidates so
    that base plus candidates is the complete graph on 9 nodes.  Each
    player owns 10 candidates.  Line cost
    is the Euclidean distance between substations, a stand-in for
    transmission loss.  Each budget is the cheapest feasible selection plus
    ``budget_slack`` of that amount.
    """
    nodes = [{"id": v, "side": 1 if v <= 4 else 2} for v in range(9)]
    base = {tuple(sorted(p)) for p in PSN_BASE}
    cands = [p for p in itertools.combinations(range(9), 2) if p not in base]
    links = []
    for i, (u, w) in enumerate(cands):
        if u <= 4 and w <= 4:
            owner = 1
        elif u > 4 and w > 4:
            owner = 2
        else:
            owner = 1 if (u, w) in PSN_A_CROSS else 2
        (x1, y1), (x2, y2) = PSN_POSITIONS[u], PSN_POSITIONS[w]
        links.append({"id": i, "u": u, "w": w, "owner": owner,
                      "cost": round(math.hypot(x1 - x2, y1 - y2), 2)})
    players = []
    for p, k in zip((1, 2), quotas):
        costs = sorted(c["cost"] for c in links if c["owner"] == p)
        floor = sum(costs[:k])
        players.append({"id": p, "budget": round(floor * (1.0 + budget_slack), 2), "quota": k})
    return {
        "schema": SCHEMA,
        "name": "psn_5x4",
        "description": (
            "Representative 5+4 power-system network: 16 existing lines, 20 candidate lines, "
            "cost = substation distance. Illustrative data, NOT the unpublished costs behind "
            "any reported LOC figure."
        ),
        "nodes": nodes,
        "base_links": [list(p) for p in sorted(base)],
        "candidate_links": links,
        "players": players,
    }
