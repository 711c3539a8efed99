import itertools
import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from netgame.files import parse_instance  # noqa: E402
from netgame.game import GameState, LinkCatalog, PlayerSpec, make_instance  # noqa: E402
from netgame.graph import Topology  # noqa: E402
from netgame.sweep import builtin_path  # noqa: E402

SHIPPED = ["complete_4x4", "fig1_4x4_k7", "psn_5x4", "path3", "disconnected_4"]


def shipped_raw(name):
    return json.loads(builtin_path(f"{name}.json").read_text())


def shipped(name):
    return parse_instance(shipped_raw(name))


def raw_with_quota(name, k1, k2=None, relax_budget=True):
    raw = shipped_raw(name)
    raw.pop("initial_strategies", None)
    for p, k in zip(raw["players"], (k1, k1 if k2 is None else k2)):
        p["quota"] = k
        if relax_budget:
            p["budget"] = None
    return raw


def random_step_instance(seed, n=None, m=None, q=None):
    """One player choosing among mixed-cost links on top of a random base.

    n <= 10, at most 12 owned links, quota <= 6; the budget lies between the
    cheapest and the most expensive quota-subset.
    """
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(4, 11))
    pairs = list(itertools.combinations(range(n), 2))
    rng.shuffle(pairs)
    nb = int(rng.integers(0, n))
    base, rest = pairs[:nb], pairs[nb:]
    m = min(m or int(rng.integers(1, min(12, len(rest)) + 1)), len(rest))
    cand = rest[:m]
    # player 1 may own links within G1 or across, so no candidate lies within G2
    sides = [1] * n
    sides[n - 1] = 2
    topo = Topology(n, tuple(sides), frozenset(base))
    entries = [(u, w, 1, float(np.round(rng.uniform(0.5, 3.0), 2))) for u, w in cand]
    cat = LinkCatalog.build(topo, entries)
    costs = sorted(e.cost for e in cat)
    q = q if q is not None else int(rng.integers(0, min(6, m) + 1))
    lo, hi = sum(costs[:q]), (sum(costs[-q:]) if q else 0.0)
    budget = float(np.round(lo + rng.uniform(0, 1) * (hi - lo), 3))
    spec = PlayerSpec.for_catalog(cat, 1, max(budget, lo), q)
    return make_instance(n, base, [spec], cat)


def random_game(seed, n1=None, n2=None):
    """A small two-player game with mixed costs, sized for exact team solves."""
    rng = np.random.default_rng(seed)
    n1 = n1 or int(rng.integers(2, 5))
    n2 = n2 or int(rng.integers(2, 5))
    n = n1 + n2
    sides = tuple([1] * n1 + [2] * n2)
    pairs = list(itertools.combinations(range(n), 2))
    rng.shuffle(pairs)
    nb = int(rng.integers(0, n))
    base, rest = pairs[:nb], pairs[nb:]
    topo = Topology(n, sides, frozenset(base))
    entries = []
    for u, w in rest[:12]:
        if sides[u] == sides[w]:
            owner = sides[u]
        else:
            owner = int(rng.integers(1, 3))
        entries.append((u, w, owner, float(np.round(rng.uniform(0.5, 3.0), 2))))
    cat = LinkCatalog.build(topo, entries)
    specs = []
    for p in (1, 2):
        costs = sorted(cat[i].cost for i in cat.owned(p))
        q = int(rng.integers(0, min(4, len(costs)) + 1))
        lo, hi = sum(costs[:q]), (sum(costs[-q:]) if q else 0.0)
        budget = lo + float(rng.uniform(0, 1)) * (hi - lo)
        specs.append(PlayerSpec.for_catalog(cat, p, budget, q))
    return GameState(topo, cat, tuple(specs))


@pytest.fixture(params=SHIPPED)
def shipped_instance(request):
    return shipped(request.param)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
