"""On-disk formats: instance, topology, fractional-solution and result files.

All files are JSON objects carrying a ``schema`` field with a version
suffix.  Output is written with a fixed key order and a trailing newline so
that identical runs produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import InstanceFormatError
from .exact import DEFAULT_CAP
from .game import GameState, LinkCatalog, PlayerSpec, Strategy
from .graph import Topology
from .relaxed import FractionalSolution, SolverConfig

INSTANCE_SCHEMA = "netgame-instance/1"
TOPOLOGY_SCHEMA = "netgame-topology/1"
FRACTIONAL_SCHEMA = "netgame-fractional/1"

SOLVER_KEYS = {
    "tolerance": float, "max_iterations": int, "line_search_tolerance": float,
    "method": str, "cluster_width": float, "max_cuts_per_point": int,
}


@dataclass(frozen=True)
class Instance:
    name: str
    description: str
    base: Topology
    catalog: LinkCatalog
    specs: tuple[PlayerSpec, PlayerSpec]
    initial: GameState
    config: SolverConfig
    cap: int
    max_steps: int
    digest: str
    raw: dict


def fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def num(x: float) -> float:
    """Round a computed value for JSON output; -0.0 is normalised to 0.0."""
    r = round(float(x), 6)
    return 0.0 if r == 0 else r


def digest_of(raw: dict) -> str:
    blob = json.dumps(raw, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _require(d, key, where):
    if key not in d:
        raise InstanceFormatError(f"{where}: missing field {key!r}")
    return d[key]


def parse_instance(raw: dict) -> Instance:
    """Validate an instance dictionary and build the game objects it describes."""
    if not isinstance(raw, dict):
        raise InstanceFormatError("instance must be a JSON object")
    schema = raw.get("schema")
    if schema != INSTANCE_SCHEMA:
        raise InstanceFormatError(f"unsupported schema {schema!r}; expected {INSTANCE_SCHEMA!r}")
    try:
        nodes = sorted(_require(raw, "nodes", "instance"), key=lambda v: int(v["id"]))
        ids = [int(v["id"]) for v in nodes]
        if ids != list(range(len(ids))):
            raise InstanceFormatError("node ids must be 0..n-1 without gaps")
        sides = tuple(int(v["side"]) for v in nodes)
        base_pairs = [tuple(int(x) for x in p) for p in raw.get("base_links", [])]
        for p in base_pairs:
            if len(p) != 2:
                raise InstanceFormatError(f"base link {list(p)} is not a pair")
        base = Topology(len(ids), sides, frozenset(base_pairs))

        cands = sorted(raw.get("candidate_links", []), key=lambda c: int(c["id"]))
        if [int(c["id"]) for c in cands] != list(range(len(cands))):
            raise InstanceFormatError("candidate link ids must be 0..m-1 without gaps")
        catalog = LinkCatalog.build(
            base, [(int(c["u"]), int(c["w"]), int(c["owner"]), float(c.get("cost", 0.0))) for c in cands]
        )

        players = {int(p["id"]): p for p in _require(raw, "players", "instance")}
        if sorted(players) != [1, 2]:
            raise InstanceFormatError("players must be exactly ids 1 and 2")
        specs = []
        for pid in (1, 2):
            p = players[pid]
            budget = p.get("budget")
            budget = math.inf if budget is None else float(budget)
            quota = _require(p, "quota", f"player {pid}")
            if int(quota) != quota:
                raise InstanceFormatError(f"player {pid}: quota must be an integer")
            specs.append(PlayerSpec.for_catalog(catalog, pid, budget, int(quota)))
        specs = tuple(specs)

        init = raw.get("initial_strategies")
        strategies = None
        if init is not None:
            strategies = tuple(Strategy(pid, tuple(int(i) for i in init.get(str(pid), []))) for pid in (1, 2))
        state = GameState(base, catalog, specs, strategies)

        solver = dict(raw.get("solver", {}))
        cap = int(solver.pop("enumeration_cap", DEFAULT_CAP))
        max_steps = int(solver.pop("max_steps", 50))
        unknown = set(solver) - set(SOLVER_KEYS)
        if unknown:
            raise InstanceFormatError(f"unknown solver settings {sorted(unknown)}")
        config = SolverConfig(**{k: SOLVER_KEYS[k](v) for k, v in solver.items()})
    except (KeyError, TypeError) as exc:
        raise InstanceFormatError(f"malformed instance: {exc}") from exc
    return Instance(
        name=str(raw.get("name", "instance")), description=str(raw.get("description", "")),
        base=base, catalog=catalog, specs=specs, initial=state, config=config,
        cap=cap, max_steps=max_steps, digest=digest_of(raw), raw=raw,
    )


def read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise InstanceFormatError(f"{path}: {exc.strerror}") from exc


def load_instance(path) -> Instance:
    return parse_instance(read_json(path))


def write_json(path, obj) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(obj, indent=2) + "\n")


def topology_to_dict(topo: Topology, **extra) -> dict:
    d = {"schema": TOPOLOGY_SCHEMA, "n": topo.n, "sides": list(topo.sides),
         "links": [list(p) for p in topo.sorted_links()]}
    d.update(extra)
    return d


def parse_topology(raw: dict) -> Topology:
    if raw.get("schema") != TOPOLOGY_SCHEMA:
        raise InstanceFormatError(f"unsupported topology schema {raw.get('schema')!r}")
    try:
        return Topology(int(raw["n"]), tuple(int(s) for s in raw["sides"]),
                        frozenset(tuple(int(x) for x in p) for p in raw["links"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"malformed topology: {exc}") from exc


def fractional_to_dict(frac: FractionalSolution, *, instance_digest: str, player: int,
                       context: dict) -> dict:
    return {
        "schema": FRACTIONAL_SCHEMA,
        "instance_digest": instance_digest,
        "player": player,
        "context": context,
        "lambda2": num(frac.lambda2),
        "upper_bound": num(frac.upper_bound),
        "converged": frac.converged,
        "iterations": frac.iterations,
        "weights": {str(k): float(v) for k, v in sorted(frac.weights.items())},
    }


def parse_fractional(raw: dict):
    if raw.get("schema") != FRACTIONAL_SCHEMA:
        raise InstanceFormatError(f"unsupported fractional schema {raw.get('schema')!r}")
    try:
        weights = {int(k): float(v) for k, v in raw["weights"].items()}
        return raw["instance_digest"], int(raw["player"]), raw.get("context", {}), weights
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"malformed fractional solution: {exc}") from exc
