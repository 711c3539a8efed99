"""Players, constraints, strategies and the per-step player problem.

A move is modelled as a fresh selection: the mover drops every link it
formed at the previous step and picks exactly ``quota`` of its owned links
within ``budget``.  Dropping ``k`` and adding ``k`` keeps the add/delete counts
balanced automatically, so the per-step problem only needs the quota,
budget and ownership constraints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstraintError, StructuralError
from .graph import Link, LinkKind, Topology, canonical_pair, laplacian_from_pairs, link_kind

BUDGET_RTOL = 1e-12


def budget_limit(budget: float) -> float:
    """Largest total cost treated as within ``budget`` (absorbs summation noise)."""
    if math.isinf(budget):
        return budget
    return budget + BUDGET_RTOL * max(1.0, abs(budget))


def within_budget(total: float, budget: float) -> bool:
    return total <= budget_limit(budget)


@dataclass(frozen=True)
class LinkCatalog:
    """All candidate links, ordered by id, each owned by exactly one player."""

    links: tuple[Link, ...]

    def __post_init__(self):
        links = tuple(self.links)
        object.__setattr__(self, "links", links)
        seen = set()
        for i, e in enumerate(links):
            if e.id != i:
                raise StructuralError(f"link ids must be dense and ordered; position {i} has id {e.id}")
            if e.pair in seen:
                raise StructuralError(f"duplicate candidate link {e.pair}")
            seen.add(e.pair)
            if e.kind is LinkKind.WITHIN_G1 and e.owner != 1:
                raise StructuralError(f"link {e.id} lies within G1 but is owned by player {e.owner}")
            if e.kind is LinkKind.WITHIN_G2 and e.owner != 2:
                raise StructuralError(f"link {e.id} lies within G2 but is owned by player {e.owner}")
        owned = {p: tuple(e.id for e in links if e.owner == p) for p in (1, 2)}
        object.__setattr__(self, "_owned", owned)

    @classmethod
    def build(cls, topology: Topology, entries: Iterable[tuple]) -> "LinkCatalog":
        """Create links from ``(u, w, owner, cost)`` tuples; ids follow input order."""
        links = []
        for i, (u, w, owner, cost) in enumerate(entries):
            u, w = canonical_pair(u, w)
            if w >= topology.n or u < 0:
                raise StructuralError(f"candidate link {(u, w)} out of range for n={topology.n}")
            links.append(Link(i, u, w, link_kind(topology.sides, u, w), float(cost), int(owner)))
        return cls(tuple(links))

    def __len__(self):
        return len(self.links)

    def __iter__(self):
        return iter(self.links)

    def __getitem__(self, i: int) -> Link:
        return self.links[i]

    def owned(self, player: int) -> tuple[int, ...]:
        if player not in self._owned:
            raise ConstraintError(f"player id must be 1 or 2, got {player}")
        return self._owned[player]

    def check_sides(self, topology: Topology) -> None:
        for e in self.links:
            if e.w >= topology.n:
                raise StructuralError(f"link {e.id} references node {e.w} outside topology")
            if e.kind is not topology.kind(e.u, e.w):
                raise StructuralError(f"link {e.id}: kind {e.kind.value} does not match node sides")


@dataclass(frozen=True)
class PlayerSpec:
    """Budget, link quota and owned links of one player.

    ``costs`` is aligned with ``owned_links``.  Construction fails with
    :class:`ConstraintError` when even the cheapest ``quota`` owned links
    exceed the budget.
    """

    id: int
    budget: float
    quota: int
    owned_links: tuple[int, ...]
    costs: tuple[float, ...]

    def __post_init__(self):
        if self.id not in (1, 2):
            raise ConstraintError(f"player id must be 1 or 2, got {self.id}")
        object.__setattr__(self, "owned_links", tuple(int(i) for i in self.owned_links))
        object.__setattr__(self, "costs", tuple(float(c) for c in self.costs))
        if len(self.costs) != len(self.owned_links):
            raise ConstraintError("costs must align with owned_links")
        if self.quota < 0 or int(self.quota) != self.quota:
            raise ConstraintError(f"player {self.id}: quota must be a non-negative integer")
        object.__setattr__(self, "quota", int(self.quota))
        if not self.budget >= 0:
            raise ConstraintError(f"player {self.id}: budget must be >= 0")
        if self.quota > len(self.owned_links):
            raise ConstraintError(
                f"player {self.id}: quota {self.quota} exceeds {len(self.owned_links)} owned links"
            )
        if not within_budget(self.min_cost(), self.budget):
            raise ConstraintError(
                f"player {self.id}: cheapest {self.quota} links cost {self.min_cost():g} "
                f"> budget {self.budget:g}"
            )

    @classmethod
    def for_catalog(cls, catalog: LinkCatalog, id: int, budget: float, quota: int) -> "PlayerSpec":
        owned = catalog.owned(id)
        return cls(id, float(budget), quota, owned, tuple(catalog[i].cost for i in owned))

    def cost_of(self, link_id: int) -> float:
        return self.costs[self.owned_links.index(link_id)]

    def min_cost_selection(self) -> tuple[int, ...]:
        order = sorted(range(len(self.owned_links)), key=lambda j: (self.costs[j], self.owned_links[j]))
        return tuple(sorted(self.owned_links[j] for j in order[: self.quota]))

    def min_cost(self) -> float:
        return math.fsum(sorted(self.costs)[: self.quota])


@dataclass(frozen=True)
class Strategy:
    """The set of catalog link ids a player currently has formed."""

    player: int
    selected: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "selected", tuple(sorted(int(i) for i in self.selected)))


def make_strategy(spec: PlayerSpec, catalog: LinkCatalog, selected: Iterable[int]) -> Strategy:
    """Construct a :class:`Strategy`, raising :class:`ConstraintError` on any violation."""
    s = Strategy(spec.id, tuple(selected))
    problems = validate_strategy(spec, catalog, s)
    if problems:
        raise ConstraintError(f"invalid strategy for player {spec.id}: " + "; ".join(problems))
    return s


def validate_strategy(spec: PlayerSpec, catalog: LinkCatalog, s: Strategy) -> list[str]:
    """Return the violated constraints as ``"name: detail"`` strings; empty means ok."""
    out = []
    if s.player != spec.id:
        out.append(f"player: strategy belongs to player {s.player}, spec to {spec.id}")
    if len(set(s.selected)) != len(s.selected):
        out.append("duplicate: a link is selected more than once")
    unknown = [i for i in s.selected if not 0 <= i < len(catalog)]
    if unknown:
        out.append(f"ownership: unknown link ids {unknown}")
    foreign = [i for i in s.selected if 0 <= i < len(catalog) and i not in spec.owned_links]
    if foreign:
        out.append(f"ownership: links {foreign} are not owned by player {spec.id}")
    if len(s.selected) != spec.quota:
        out.append(f"quota: {len(s.selected)} links selected, quota is {spec.quota}")
    total = math.fsum(catalog[i].cost for i in s.selected if 0 <= i < len(catalog))
    if not within_budget(total, spec.budget):
        out.append(f"budget: total cost {total:.12g} exceeds budget {spec.budget:.12g}")
    return out


@dataclass(frozen=True)
class Block:
    """One player's decision variables inside a :class:`ProblemInstance`.

    ``us``/``ws`` hold link endpoints.  Links already present in the fixed
    part are inert: they are encoded with ``u == w`` so their rank-one term
    and supergradient vanish.
    """

    player: int
    link_ids: tuple[int, ...]
    us: np.ndarray
    ws: np.ndarray
    costs: np.ndarray
    quota: int
    budget: float

    @property
    def m(self) -> int:
        return len(self.link_ids)

    def key(self):
        return (self.player, self.link_ids, self.us.tobytes(), self.ws.tobytes(),
                self.costs.tobytes(), self.quota, self.budget)


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """Maximise lambda2 of ``fixed + sum_e x_e a_e a_e^T`` over the blocks.

    Each block picks exactly ``quota`` of its links with total cost within
    ``budget``.  A best-response step has one block; the team problem has
    one per player.
    """

    n: int
    fixed_pairs: frozenset
    fixed: np.ndarray
    blocks: tuple[Block, ...]

    def key(self):
        return (self.n, self.fixed.tobytes(), tuple(b.key() for b in self.blocks))

    def __eq__(self, other):
        return isinstance(other, ProblemInstance) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    @property
    def m(self) -> int:
        return sum(b.m for b in self.blocks)

    def concat(self):
        """Concatenated ``(us, ws, costs, starts, quotas, budgets)`` arrays."""
        us = np.concatenate([b.us for b in self.blocks]).astype(np.intc)
        ws = np.concatenate([b.ws for b in self.blocks]).astype(np.intc)
        costs = np.concatenate([b.costs for b in self.blocks]).astype(float)
        starts = np.cumsum([0] + [b.m for b in self.blocks]).astype(np.intc)
        quotas = np.array([b.quota for b in self.blocks], dtype=np.intc)
        budgets = np.array([b.budget for b in self.blocks], dtype=float)
        return us, ws, costs, starts, quotas, budgets

    def laplacian(self, weights: np.ndarray) -> np.ndarray:
        us, ws = self._endpoints()
        L = self.fixed.copy()
        np.add.at(L, (us, us), weights)
        np.add.at(L, (ws, ws), weights)
        np.add.at(L, (us, ws), -weights)
        np.add.at(L, (ws, us), -weights)
        return L

    def _endpoints(self):
        cache = self.__dict__.get("_ep")
        if cache is None:
            cache = (np.concatenate([b.us for b in self.blocks]).astype(np.intp),
                     np.concatenate([b.ws for b in self.blocks]).astype(np.intp))
            object.__setattr__(self, "_ep", cache)
        return cache

    def restrict(self, fix: dict[int, Sequence[int]]) -> "ProblemInstance":
        """Move block-local positions ``fix[b]`` into the fixed part.

        Quotas and budgets of the affected blocks shrink accordingly.
        """
        fixed = self.fixed.copy()
        pairs = set(self.fixed_pairs)
        blocks = []
        for bi, b in enumerate(self.blocks):
            chosen = sorted(set(fix.get(bi, ())))
            for j in chosen:
                u, w = int(b.us[j]), int(b.ws[j])
                if u != w:
                    fixed[u, u] += 1.0
                    fixed[w, w] += 1.0
                    fixed[u, w] -= 1.0
                    fixed[w, u] -= 1.0
                    pairs.add((u, w))
            keep = [j for j in range(b.m) if j not in set(chosen)]
            spent = math.fsum(float(b.costs[j]) for j in chosen)
            blocks.append(Block(
                b.player,
                tuple(b.link_ids[j] for j in keep),
                b.us[keep].copy(), b.ws[keep].copy(), b.costs[keep].copy(),
                b.quota - len(chosen),
                b.budget - spent if not math.isinf(b.budget) else b.budget,
            ))
        fixed.setflags(write=False)
        return ProblemInstance(self.n, frozenset(pairs), fixed, tuple(blocks))


def make_instance(n: int, fixed_pairs: Iterable, specs: Sequence[PlayerSpec], catalog: LinkCatalog) -> ProblemInstance:
    fixed_pairs = frozenset(canonical_pair(u, w) for u, w in fixed_pairs)
    fixed = laplacian_from_pairs(n, sorted(fixed_pairs))
    fixed.setflags(write=False)
    blocks = []
    for spec in specs:
        us, ws = [], []
        for i in spec.owned_links:
            e = catalog[i]
            if e.pair in fixed_pairs:
                us.append(0)
                ws.append(0)
            else:
                us.append(e.u)
                ws.append(e.w)
        blocks.append(Block(
            spec.id, spec.owned_links,
            np.array(us, dtype=np.intc), np.array(ws, dtype=np.intc),
            np.array(spec.costs, dtype=float), spec.quota, float(spec.budget),
        ))
    return ProblemInstance(n, fixed_pairs, fixed, tuple(blocks))


def other(player: int) -> int:
    return 3 - player


@dataclass(frozen=True)
class GameState:
    """Fixed base network, link catalog, both players and their strategies."""

    base: Topology
    catalog: LinkCatalog
    specs: tuple[PlayerSpec, PlayerSpec]
    strategies: tuple[Strategy, Strategy] = field(default=None)
    step: int = 0

    def __post_init__(self):
        self.catalog.check_sides(self.base)
        specs = tuple(self.specs)
        if [s.id for s in specs] != [1, 2]:
            raise ConstraintError("specs must be given for players 1 and 2 in order")
        for s in specs:
            if set(s.owned_links) != set(self.catalog.owned(s.id)):
                raise ConstraintError(f"player {s.id}: owned links disagree with the catalog")
        object.__setattr__(self, "specs", specs)
        if self.strategies is None:
            strategies = tuple(Strategy(s.id, s.min_cost_selection()) for s in specs)
        else:
            strategies = tuple(self.strategies)
        for spec, strat in zip(specs, strategies):
            problems = validate_strategy(spec, self.catalog, strat)
            if problems:
                raise ConstraintError(f"player {spec.id} initial strategy: " + "; ".join(problems))
        object.__setattr__(self, "strategies", strategies)

    def spec(self, player: int) -> PlayerSpec:
        return self.specs[player - 1]

    def strategy(self, player: int) -> Strategy:
        return self.strategies[player - 1]

    def with_strategy(self, s: Strategy, step: int | None = None) -> "GameState":
        strategies = list(self.strategies)
        strategies[s.player - 1] = s
        return replace(self, strategies=tuple(strategies), step=self.step + 1 if step is None else step)

    def selected_pairs(self, player: int) -> list:
        return [self.catalog[i].pair for i in self.strategy(player).selected]


def induced_topology(state: GameState) -> Topology:
    return state.base.with_links(state.selected_pairs(1) + state.selected_pairs(2))


def canonical_step_problem(state: GameState, mover: int) -> ProblemInstance:
    """The mover's fresh-selection problem against the opponent's current links."""
    if mover not in (1, 2):
        raise ConstraintError(f"mover must be 1 or 2, got {mover}")
    fixed = set(state.base.links) | set(state.selected_pairs(other(mover)))
    return make_instance(state.base.n, fixed, [state.spec(mover)], state.catalog)


def team_problem(base: Topology, catalog: LinkCatalog, specs: Sequence[PlayerSpec]) -> ProblemInstance:
    """Both players' variables in one instance; each keeps its own quota and budget."""
    return make_instance(base.n, base.links, specs, catalog)
