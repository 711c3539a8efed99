"""Regenerate the instance and sweep files shipped in ``netgame/instances``."""

from pathlib import Path

from netgame.files import write_json
from netgame.models import grown_model, psn_model

OUT = Path(__file__).resolve().parents[1] / "src" / "netgame" / "instances"


def small(name, description, sides, base, cands, quotas=(0, 0)):
    return {
        "schema": "netgame-instance/1",
        "name": name,
        "description": description,
        "nodes": [{"id": v, "side": s} for v, s in enumerate(sides)],
        "base_links": [list(p) for p in base],
        "candidate_links": [{"id": i, "u": u, "w": w, "owner": o, "cost": c}
                            for i, (u, w, o, c) in enumerate(cands)],
        "players": [{"id": p, "budget": None, "quota": q} for p, q in zip((1, 2), quotas)],
    }


def main():
    files = {
        "complete_4x4": grown_model(4, 4, name="complete_4x4"),
        "fig1_4x4_k7": grown_model(4, 4, quotas=(7, 7), name="fig1_4x4_k7"),
        "psn_5x4": psn_model(),
        "path3": small("path3", "3-node path, nothing to add", (1, 1, 2), [(0, 1), (1, 2)],
                       [(0, 2, 1, 1.0)]),
        "disconnected_4": small("disconnected_4", "two separate links, nothing added", (1, 1, 2, 2),
                                [(0, 1), (2, 3)], [(1, 2, 1, 1.0), (0, 3, 2, 1.0)]),
        "sweep_psn_quota": {
            "schema": "netgame-sweep/1", "name": "psn quota sweep",
            "variable": "quota", "instance": "psn_5x4.json", "relax_budget": True,
            "range": {"start": 0, "stop": 10}, "solver": "exact", "first_mover": 1,
        },
        "sweep_fig1_quota": {
            "schema": "netgame-sweep/1", "name": "4+4 quota sweep, relaxed solver with greedy rounding",
            "variable": "quota", "instance": "complete_4x4.json", "relax_budget": True,
            "range": {"start": 0, "stop": 14}, "solver": "rgp", "scheme": "greedy", "first_mover": 1,
        },
        "sweep_nodes": {
            "schema": "netgame-sweep/1", "name": "node-count sweep, uniform cost",
            "variable": "nodes", "start": [3, 3], "range": {"start": 0, "stop": 4},
            "quotas": [2, 2], "budgets": [2.0, 2.0], "cost": 1.0, "base": "spine",
            "solver": "exact", "first_mover": 1,
        },
    }
    for name, obj in files.items():
        write_json(OUT / f"{name}.json", obj)
        print(OUT / f"{name}.json")


if __name__ == "__main__":
    main()
