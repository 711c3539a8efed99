"""``netgame`` command-line interface.

Exit codes: 0 success, 2 invalid input, 3 solver failure, 4 enumeration
cap exceeded.  Log verbosity is taken from ``NETGAME_LOG`` (a standard
logging level name, default ``WARNING``); logs go to stderr and never
into output files.
"""

from __future__ import annotations

import csv
import logging
import os
import sys
from pathlib import Path

import click

from . import kernels
from .dynamics import (
    EquilibriumResult, Solver, TrajectoryRecord, loc_percent, run_best_response_dynamics, solve_team,
)
from .errors import InstanceFormatError, NetgameError, UndefinedMetricError
from .files import (
    fmt, fractional_to_dict, load_instance, num, parse_fractional, read_json, topology_to_dict, write_json,
)
from .game import GameState, canonical_step_problem, induced_topology
from .graph import build_laplacian, components
from .relaxed import FractionalSolution, solve_rgp
from .rounding import RoundingScheme, round_solution
from .spectral import lambda2 as spectral_lambda2
from .sweep import builtin_path, load_sweep, run_sweep, write_rows

RESULT_SCHEMA = "netgame-result/1"
LOC_SCHEMA = "netgame-loc/1"
STEP_NOTE = "steps count single-player moves; total_steps includes the verification round"
SCHEMES = ["greedy", "lbl", "loglbl", "link-by-link", "log-link-by-link"]

log = logging.getLogger("netgame")


def _configure_logging():
    level = os.environ.get("NETGAME_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _instance_path(ref: str) -> Path:
    if ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        return builtin_path(name if name.endswith(".json") else name + ".json")
    return Path(ref)


def _fail(exc: NetgameError):
    click.echo(f"error: {exc}", err=True)
    sys.exit(exc.exit_code)


def _selection(strategy) -> str:
    return " ".join(str(i) for i in strategy.selected)


def _strategies_json(strategies) -> dict:
    return {str(s.player): list(s.selected) for s in strategies}


def write_trajectory(path, traj: TrajectoryRecord) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "mover", "lambda2", "changed", "selection_p1", "selection_p2"])
        for e in traj.entries:
            w.writerow([e.step, e.mover, fmt(e.lambda2), int(e.changed),
                        _selection(e.strategies[0]), _selection(e.strategies[1])])


def _topology_file(path, inst, strategies, **extra):
    state = GameState(inst.base, inst.catalog, inst.specs, tuple(strategies))
    write_json(path, topology_to_dict(induced_topology(state), instance=inst.name,
                                      instance_digest=inst.digest, **extra))


def _write_loc(prefix: str, inst, solver_label: str) -> dict | None:
    """Write ``PREFIX_loc.json`` if matching equilibrium and team results exist."""
    ne_path, team_path = Path(f"{prefix}_ne.json"), Path(f"{prefix}_team.json")
    if not (ne_path.exists() and team_path.exists()):
        return None
    ne, team = read_json(ne_path), read_json(team_path)
    for r in (ne, team):
        if r.get("instance_digest") != inst.digest or r.get("solver") != solver_label:
            return None
    if ne.get("status") != "converged":
        return None
    # from the stored 6-decimal values, so split and combined runs agree
    lam_team, lam_ne = float(team["lambda2_team"]), float(ne["lambda2_NE"])
    out = {"schema": LOC_SCHEMA, "instance": inst.name, "instance_digest": inst.digest,
           "solver": solver_label, "lambda2_team": num(lam_team), "lambda2_NE": num(lam_ne)}
    try:
        loc = loc_percent(lam_team, lam_ne)
        out.update(loc_percent=num(loc), negative=bool(loc < -1e-8), defined=True)
    except UndefinedMetricError as exc:
        out.update(loc_percent=None, negative=False, defined=False, reason=str(exc))
    write_json(f"{prefix}_loc.json", out)
    return out


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact", message="%(version)s")
def main():
    """Two-player network formation games that maximise algebraic connectivity."""
    _configure_logging()
    log.debug("kernel backend: %s", kernels.BACKEND)


@main.command("lambda2")
@click.argument("instance")
def cmd_lambda2(instance):
    """Print lambda2 of the base topology plus the initial strategies."""
    try:
        inst = load_instance(_instance_path(instance))
        topo = induced_topology(inst.initial)
        parts = components(topo.n, topo.links)
        lam = spectral_lambda2(build_laplacian(topo)).lambda2 if topo.n >= 2 else 0.0
    except NetgameError as exc:
        _fail(exc)
    suffix = "" if parts == 1 else " (disconnected)"
    click.echo(f"lambda2 = {fmt(lam)}{suffix}")
    click.echo(f"nodes = {topo.n}")
    click.echo(f"links = {len(topo.links)}")
    click.echo(f"components = {parts}")


def _solver_options(f):
    f = click.option("--scheme", type=click.Choice(SCHEMES), default="greedy", show_default=True,
                     help="rounding scheme for the rgp solver")(f)
    f = click.option("--solver", "solver_kind", type=click.Choice(["exact", "rgp"]), default="exact",
                     show_default=True)(f)
    return f


@main.command("solve")
@click.argument("instance")
@click.option("--mode", type=click.Choice(["br", "team", "both"]), default="both", show_default=True)
@_solver_options
@click.option("--first-mover", type=click.IntRange(1, 2), default=1, show_default=True)
@click.option("--max-steps", type=click.IntRange(1), default=None, help="default from the instance (50)")
@click.option("--out", "prefix", required=True, help="output path prefix")
def cmd_solve(instance, mode, solver_kind, scheme, first_mover, max_steps, prefix):
    """Run best-response dynamics and/or the team solver.

    Writes PREFIX_trajectory.csv, PREFIX_ne.json, PREFIX_ne_topology.json
    (br), PREFIX_team.json, PREFIX_team_topology.json (team) and
    PREFIX_loc.json once both results exist for the same instance.
    """
    try:
        inst = load_instance(_instance_path(instance))
        solver = Solver(solver_kind, RoundingScheme.parse(scheme), inst.config, inst.cap)
    except NetgameError as exc:
        _fail(exc)
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    label = solver.label()
    common = {"instance": inst.name, "instance_digest": inst.digest, "solver": label}

    if mode in ("br", "both"):
        try:
            result, traj = run_best_response_dynamics(inst.initial, solver, max_steps or inst.max_steps,
                                                      first_mover)
        except NetgameError as exc:
            traj = getattr(exc, "trajectory", None)
            if traj is not None:
                write_trajectory(f"{prefix}_trajectory.csv", traj)
            _fail(exc)
        write_trajectory(f"{prefix}_trajectory.csv", traj)
        out = {"schema": RESULT_SCHEMA, "kind": "best-response", **common, "first_mover": first_mover,
               "status": traj.status, "step_counting": STEP_NOTE, "total_steps": result.total_steps}
        if isinstance(result, EquilibriumResult):
            lam = result.lambda2_NE
            out.update(steps_to_converge=result.steps_to_converge, lambda2_NE=num(lam))
            click.echo(f"NE: lambda2 = {fmt(lam)} after {result.steps_to_converge} steps "
                       f"({result.total_steps} with verification)")
        else:
            lam = result.lambda2_last
            out.update(steps_to_converge=None, lambda2_NE=None, lambda2_last=num(lam))
            click.echo(f"NE: not reached within {result.total_steps} steps; last lambda2 = {fmt(lam)}")
        out.update(strategies=_strategies_json(result.state.strategies))
        write_json(f"{prefix}_ne.json", out)
        _topology_file(f"{prefix}_ne_topology.json", inst, result.state.strategies, solver=label,
                       kind="best-response")

    if mode in ("team", "both"):
        try:
            team = solve_team(inst.base, inst.catalog, inst.specs, solver)
        except NetgameError as exc:
            _fail(exc)
        write_json(f"{prefix}_team.json", {
            "schema": RESULT_SCHEMA, "kind": "team", **common,
            "lambda2_team": num(team.lambda2_team),
            "strategies": _strategies_json(team.strategies),
        })
        _topology_file(f"{prefix}_team_topology.json", inst, team.strategies, solver=label, kind="team")
        click.echo(f"team: lambda2 = {fmt(team.lambda2_team)}")

    loc = _write_loc(prefix, inst, label)
    if loc is not None:
        if loc["defined"]:
            flag = " (negative: equilibrium beats the heuristic team solution)" if loc["negative"] else ""
            click.echo(f"LOC = {fmt(loc['loc_percent'])}%{flag}")
        else:
            click.echo("LOC undefined (team lambda2 is 0)")


@main.command("sweep")
@click.argument("spec")
@click.option("--out", "prefix", required=True, help="output path prefix; writes PREFIX_sweep.csv")
@click.option("--jobs", type=click.IntRange(1), default=1, show_default=True, help="parallel worker processes")
@click.option("--timing", is_flag=True, help="add a wall_time_s column (makes output run-dependent)")
def cmd_sweep(spec, prefix, jobs, timing):
    """Run a quota or node-count sweep and write one CSV row per point."""
    try:
        sw = load_sweep(_instance_path(spec))
    except NetgameError as exc:
        _fail(exc)
    rows = run_sweep(sw, jobs=jobs, timing=timing)
    path = f"{prefix}_sweep.csv"
    write_rows(path, rows, timing=timing)
    failed = sum(1 for r in rows if r["error"])
    click.echo(f"{len(rows)} points written to {path}" + (f"; {failed} with errors" if failed else ""))


@main.command("round")
@click.argument("instance")
@click.option("--player", type=click.IntRange(1, 2), default=1, show_default=True,
              help="player whose step problem is rounded")
@click.option("--scheme", type=click.Choice(SCHEMES), default="greedy", show_default=True)
@click.option("--fractional", "frac_path", default=None,
              help="stored fractional solution; solved and written to PREFIX_fractional.json if omitted")
@click.option("--out", "prefix", required=True)
def cmd_round(instance, player, scheme, frac_path, prefix):
    """Round a fractional solution of one player's step problem.

    The step problem is the player's move against the opponent's initial
    strategy.
    """
    try:
        inst = load_instance(_instance_path(instance))
        problem = canonical_step_problem(inst.initial, player)
        scheme = RoundingScheme.parse(scheme)
        context = {"kind": "step", "opponent": _strategies_json(inst.initial.strategies)[str(3 - player)]}
        Path(prefix).parent.mkdir(parents=True, exist_ok=True)
        if frac_path is None:
            frac = solve_rgp(problem, inst.config)
            write_json(f"{prefix}_fractional.json",
                       fractional_to_dict(frac, instance_digest=inst.digest, player=player, context=context))
        else:
            digest, fplayer, fcontext, weights = parse_fractional(read_json(frac_path))
            if digest != inst.digest or fplayer != player or fcontext != context:
                raise InstanceFormatError(
                    "fractional solution was computed for a different instance, player or opponent strategy")
            frac = FractionalSolution.from_weights(weights, problem)
        rounded = round_solution(frac, problem, scheme, inst.config)
    except NetgameError as exc:
        _fail(exc)
    s = rounded.strategy
    write_json(f"{prefix}_rounded.json", {
        "schema": RESULT_SCHEMA, "kind": "rounding", "instance": inst.name, "instance_digest": inst.digest,
        "player": player, "scheme": scheme.value, "lambda2_relaxed": num(frac.lambda2),
        "lambda2": num(rounded.lambda2), "resolves": rounded.resolves, "selected": list(s.selected),
    })
    click.echo(f"relaxed lambda2 = {fmt(frac.lambda2)}")
    click.echo(f"rounded lambda2 = {fmt(rounded.lambda2)} ({scheme.value}, {rounded.resolves} re-solves)")


@main.command("instances")
def cmd_instances():
    """List the shipped instance and sweep files (use as builtin:NAME)."""
    folder = builtin_path("")
    for p in sorted(folder.glob("*.json")):
        click.echo(f"builtin:{p.stem}")


if __name__ == "__main__":
    main()
