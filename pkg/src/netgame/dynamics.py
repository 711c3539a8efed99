"""Alternating best-response dynamics, the cooperative team baseline and LOC."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import NetgameError, UndefinedMetricError
from .exact import DEFAULT_CAP, solve_bgp_exact
from .game import (
    GameState,
    LinkCatalog,
    ProblemInstance,
    Strategy,
    Topology,
    canonical_step_problem,
    induced_topology,
    team_problem,
)
from .graph import build_laplacian
from .relaxed import SolverConfig, solve_rgp
from .rounding import RoundingScheme, round_solution
from .spectral import lambda2 as spectral_lambda2

log = logging.getLogger(__name__)

LOC_NEGATIVE_TOL = 1e-8
ZERO_CONNECTIVITY = 1e-12


@dataclass(frozen=True)
class Solver:
    """``exact`` enumeration, or ``rgp`` relaxation followed by ``scheme`` rounding."""

    kind: str = "exact"
    scheme: RoundingScheme = RoundingScheme.GREEDY
    config: SolverConfig = field(default_factory=SolverConfig)
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.kind not in ("exact", "rgp"):
            raise ValueError(f"solver kind must be 'exact' or 'rgp', got {self.kind!r}")
        if isinstance(self.scheme, str):
            object.__setattr__(self, "scheme", RoundingScheme.parse(self.scheme))

    def label(self) -> str:
        return "exact" if self.kind == "exact" else f"rgp+{self.scheme.value}"

    def solve(self, instance: ProblemInstance) -> tuple[tuple[Strategy, ...], float]:
        if self.kind == "exact":
            sol = solve_bgp_exact(instance, cap=self.cap)
            return sol.strategies, sol.lambda2
        frac = solve_rgp(instance, self.config)
        rounded = round_solution(frac, instance, self.scheme, self.config)
        return rounded.strategies, rounded.lambda2


def best_response(state: GameState, mover: int, solver: Solver | None = None) -> Strategy:
    """The mover's optimal fresh selection against the opponent's current links."""
    solver = solver or Solver()
    strategies, _ = solver.solve(canonical_step_problem(state, mover))
    return strategies[0]


def state_lambda2(state: GameState) -> float:
    topo = induced_topology(state)
    if topo.n < 2:
        return 0.0
    return spectral_lambda2(build_laplacian(topo)).lambda2


@dataclass(frozen=True)
class TrajectoryEntry:
    step: int
    mover: int  # 0 for the initial state
    strategies: tuple[Strategy, Strategy]
    lambda2: float
    changed: bool

    @property
    def selection(self) -> Strategy | None:
        return self.strategies[self.mover - 1] if self.mover else None


@dataclass
class TrajectoryRecord:
    entries: list = field(default_factory=list)
    status: str = "running"  # converged | iteration-cap | error
    first_mover: int = 1
    solver: str = "exact"

    def lambda2s(self) -> list[float]:
        return [e.lambda2 for e in self.entries]


@dataclass(frozen=True)
class EquilibriumResult:
    """A strategy pair where neither player's best response changes anything.

    ``steps_to_converge`` is the number of single-player moves after which
    the equilibrium state was first reached (the verification round that
    confirms it is not counted); ``total_steps`` includes it.
    """

    state: GameState
    steps_to_converge: int
    total_steps: int
    lambda2_NE: float
    first_mover: int


@dataclass(frozen=True)
class CapReport:
    state: GameState
    total_steps: int
    lambda2_last: float
    first_mover: int


def _no_choice(state: GameState, p: int) -> bool:
    # quota 0: the empty selection is the only strategy
    return state.spec(p).quota == 0


def run_best_response_dynamics(initial: GameState, solver: Solver | None = None, max_steps: int = 50,
                               first_mover: int = 1):
    """Alternate best responses until a full round changes neither strategy.

    Returns ``(result, trajectory)`` where ``result`` is an
    :class:`EquilibriumResult` or, if ``max_steps`` moves pass without
    convergence, a :class:`CapReport`.  Solver errors propagate with the
    partial trajectory attached as ``exc.trajectory``.
    """
    solver = solver or Solver()
    if first_mover not in (1, 2):
        raise ValueError("first_mover must be 1 or 2")
    traj = TrajectoryRecord(first_mover=first_mover, solver=solver.label())
    state = initial
    traj.entries.append(TrajectoryEntry(0, 0, state.strategies, state_lambda2(state), False))
    if all(_no_choice(state, p) for p in (1, 2)):
        traj.status = "converged"
        return EquilibriumResult(state, 0, 0, traj.entries[0].lambda2, first_mover), traj
    last_change = 0
    quiet = 0
    mover = first_mover
    for step in range(1, max_steps + 1):
        try:
            s = best_response(state, mover, solver)
        except NetgameError as exc:
            traj.status = "error"
            exc.trajectory = traj
            raise
        changed = s.selected != state.strategy(mover).selected
        state = state.with_strategy(s, step=step)
        lam = state_lambda2(state)
        traj.entries.append(TrajectoryEntry(step, mover, state.strategies, lam, changed))
        log.debug("step %d mover %d lambda2 %.6f changed %s", step, mover, lam, changed)
        if changed:
            last_change, quiet = step, 0
        else:
            quiet += 1
        if quiet >= 2:
            traj.status = "converged"
            return EquilibriumResult(state, last_change, step, lam, first_mover), traj
        mover = 3 - mover
    traj.status = "iteration-cap"
    return CapReport(state, max_steps, traj.entries[-1].lambda2, first_mover), traj


@dataclass(frozen=True)
class TeamResult:
    strategies: tuple[Strategy, Strategy]
    lambda2_team: float
    solver: str


def solve_team(base: Topology, catalog: LinkCatalog, specs, solver: Solver | None = None) -> TeamResult:
    """Jointly choose both players' links to maximise lambda2.

    Each player keeps its own quota and budget.  ``exact`` enumerates the
    product of both selection spaces (subject to the cap); ``rgp`` solves
    one relaxation over both players' variables and rounds it.
    """
    solver = solver or Solver()
    specs = tuple(specs)
    strategies, value = solver.solve(team_problem(base, catalog, specs))
    return TeamResult(tuple(strategies), float(value), solver.label())


@dataclass(frozen=True)
class LocReport:
    lambda2_team: float
    lambda2_NE: float
    loc_percent: float

    @property
    def negative(self) -> bool:
        """True when the equilibrium beats the team solution (possible only with heuristics)."""
        return self.loc_percent < -LOC_NEGATIVE_TOL


def loc_percent(lambda2_team: float, lambda2_ne: float) -> float:
    if lambda2_team <= ZERO_CONNECTIVITY:
        raise UndefinedMetricError("loss of connectivity is undefined when the team lambda2 is 0")
    return 100.0 * (lambda2_team - lambda2_ne) / lambda2_team


def compute_loc(team: TeamResult, ne: EquilibriumResult | float) -> LocReport:
    lam_ne = ne if isinstance(ne, float) else ne.lambda2_NE
    return LocReport(team.lambda2_team, lam_ne, loc_percent(team.lambda2_team, lam_ne))


def state_from_team(initial: GameState, team: TeamResult) -> GameState:
    return GameState(initial.base, initial.catalog, initial.specs, team.strategies, 0)


