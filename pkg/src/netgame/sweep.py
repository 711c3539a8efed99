"""Parameter sweeps comparing equilibrium and team connectivity.

Two sweep variables are supported:

``quota``
    Topology fixed, ``k1 = k2 = k`` over the range, budgets relaxed
    (unlimited) unless ``relax_budget`` is false.
``nodes``
    Both subnetworks grow by one node per point from ``start``, with
    uniform link cost and fixed quotas and budgets (see
    :func:`netgame.models.grown_model`).
"""

from __future__ import annotations

import copy
import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .dynamics import EquilibriumResult, Solver, compute_loc, run_best_response_dynamics, solve_team
from .errors import InstanceFormatError, NetgameError
from .files import fmt, parse_instance, read_json
from .models import grown_model
from .rounding import RoundingScheme

SWEEP_SCHEMA = "netgame-sweep/1"
COLUMNS = [
    "index", "value", "n1", "n2", "k1", "k2", "lambda2_ne", "lambda2_team", "loc_percent",
    "loc_flag", "ne_status", "steps_to_converge", "total_steps", "error",
]


def builtin_path(name: str) -> Path:
    return Path(str(resources.files("netgame") / "instances" / name))


def resolve_path(ref: str, relative_to: Path | None = None) -> Path:
    """``builtin:NAME`` refers to a shipped instance file; other paths are relative to the sweep file."""
    if ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        return builtin_path(name if name.endswith(".json") else name + ".json")
    p = Path(ref)
    if not p.is_absolute() and relative_to is not None:
        p = relative_to / p
    return p


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    values: tuple[int, ...]
    solver: str = "exact"
    scheme: str = "greedy"
    first_mover: int = 1
    max_steps: int = 50
    instance: dict | None = None  # quota sweeps
    relax_budget: bool = True
    start: tuple[int, int] = (3, 3)  # node sweeps
    quotas: tuple[int, int] = (3, 3)
    budgets: tuple = (None, None)
    cost: float = 1.0
    base: str = "spine"
    cap: int | None = None
    name: str = "sweep"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variable not in ("quota", "nodes"):
            raise InstanceFormatError(f"sweep variable must be 'quota' or 'nodes', got {self.variable!r}")
        if not self.values:
            raise InstanceFormatError("sweep range is empty")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise InstanceFormatError("sweep range must be strictly increasing")
        if self.variable == "quota" and self.instance is None:
            raise InstanceFormatError("quota sweeps need an instance")
        RoundingScheme.parse(self.scheme)


def _values(rng) -> tuple[int, ...]:
    if isinstance(rng, dict):
        return tuple(range(int(rng["start"]), int(rng["stop"]) + 1, int(rng.get("step", 1))))
    return tuple(int(v) for v in rng)


def parse_sweep(raw: dict, relative_to: Path | None = None) -> SweepSpec:
    if raw.get("schema") != SWEEP_SCHEMA:
        raise InstanceFormatError(f"unsupported sweep schema {raw.get('schema')!r}; expected {SWEEP_SCHEMA!r}")
    try:
        kw = dict(
            variable=raw["variable"], values=_values(raw["range"]),
            solver=raw.get("solver", "exact"), scheme=raw.get("scheme", "greedy"),
            first_mover=int(raw.get("first_mover", 1)), max_steps=int(raw.get("max_steps", 50)),
            name=raw.get("name", "sweep"), cap=raw.get("enumeration_cap"),
        )
        if raw["variable"] == "quota":
            kw["instance"] = read_json(resolve_path(raw["instance"], relative_to))
            kw["relax_budget"] = bool(raw.get("relax_budget", True))
        else:
            kw["start"] = tuple(int(x) for x in raw.get("start", (3, 3)))
            kw["quotas"] = tuple(int(x) for x in raw.get("quotas", (3, 3)))
            kw["budgets"] = tuple(raw.get("budgets", (None, None)))
            kw["cost"] = float(raw.get("cost", 1.0))
            kw["base"] = raw.get("base", "spine")
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"malformed sweep spec: {exc}") from exc
    return SweepSpec(**kw)


def load_sweep(path) -> SweepSpec:
    path = Path(path)
    return parse_sweep(read_json(path), path.parent)


def point_instance(spec: SweepSpec, value: int) -> dict:
    """Instance dictionary for one sweep point."""
    if spec.variable == "quota":
        raw = copy.deepcopy(spec.instance)
        raw.pop("initial_strategies", None)
        for p in raw["players"]:
            p["quota"] = value
            if spec.relax_budget:
                p["budget"] = None
        raw["name"] = f"{raw.get('name', 'instance')}_k{value}"
    else:
        n1, n2 = spec.start[0] + value, spec.start[1] + value
        raw = grown_model(n1, n2, quotas=spec.quotas, budgets=spec.budgets, cost=spec.cost, base=spec.base)
    if spec.cap is not None:
        raw.setdefault("solver", {})["enumeration_cap"] = int(spec.cap)
    return raw


def run_point(spec: SweepSpec, index: int, timing: bool = False) -> dict:
    value = spec.values[index]
    row = {c: "" for c in COLUMNS}
    row.update(index=index, value=value)
    t0 = time.perf_counter()
    errors = []
    try:
        inst = parse_instance(point_instance(spec, value))
    except NetgameError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    sides = inst.base.sides
    row.update(n1=sides.count(1), n2=sides.count(2), k1=inst.specs[0].quota, k2=inst.specs[1].quota)
    solver = Solver(spec.solver, spec.scheme, inst.config, inst.cap)
    ne = team = None
    try:
        result, traj = run_best_response_dynamics(inst.initial, solver, spec.max_steps, spec.first_mover)
        row["ne_status"] = traj.status
        row["total_steps"] = result.total_steps
        if isinstance(result, EquilibriumResult):
            ne = result
            row["lambda2_ne"] = fmt(result.lambda2_NE)
            row["steps_to_converge"] = result.steps_to_converge
        else:
            row["lambda2_ne"] = fmt(result.lambda2_last)
    except NetgameError as exc:
        row["ne_status"] = "error"
        errors.append(f"ne: {type(exc).__name__}: {exc}")
    try:
        team = solve_team(inst.base, inst.catalog, inst.specs, solver)
        row["lambda2_team"] = fmt(team.lambda2_team)
    except NetgameError as exc:
        errors.append(f"team: {type(exc).__name__}: {exc}")
    if ne is not None and team is not None:
        try:
            loc = compute_loc(team, ne)
            row["loc_percent"] = fmt(loc.loc_percent)
            row["loc_flag"] = "negative" if loc.negative else "ok"
        except NetgameError as exc:
            row["loc_flag"] = "undefined"
            errors.append(f"loc: {type(exc).__name__}: {exc}")
    row["error"] = " | ".join(errors)
    if timing:
        row["wall_time_s"] = fmt(time.perf_counter() - t0)
    return row


def _run_point_star(args):
    return run_point(*args)


def run_sweep(spec: SweepSpec, jobs: int = 1, timing: bool = False, order=None) -> list[dict]:
    """Run every point; rows come back sorted by point index whatever the execution order."""
    indices = list(order) if order is not None else list(range(len(spec.values)))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_point_star, [(spec, i, timing) for i in indices]))
    else:
        rows = [run_point(spec, i, timing) for i in indices]
    return sorted(rows, key=lambda r: r["index"])


def write_rows(path, rows: list[dict], timing: bool = False) -> None:
    cols = COLUMNS + (["wall_time_s"] if timing else [])
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({c: r.get(c, "") for c in cols})
