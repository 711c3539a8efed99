"""Topology, links and dense Laplacian assembly.

Every link ``e = (u, w)`` contributes the rank-one term ``a_e a_e^T`` where
``a_e`` has ``+1`` at ``u`` and ``-1`` at ``w``.  Laplacians are stored as dense
``float64`` arrays; instances here have at most a few dozen nodes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import DomainError, StructuralError

Pair = tuple[int, int]


class LinkKind(str, enum.Enum):
    WITHIN_G1 = "within-G1"
    WITHIN_G2 = "within-G2"
    CROSS = "cross"


def canonical_pair(u: int, w: int) -> Pair:
    """Return ``(min, max)``; rejects self-loops."""
    u, w = int(u), int(w)
    if u == w:
        raise StructuralError(f"self-loop at node {u}")
    return (u, w) if u < w else (w, u)


def link_kind(sides: tuple[int, ...], u: int, w: int) -> LinkKind:
    su, sw = sides[u], sides[w]
    if su != sw:
        return LinkKind.CROSS
    return LinkKind.WITHIN_G1 if su == 1 else LinkKind.WITHIN_G2


@dataclass(frozen=True)
class Topology:
    """Node set split into two subnetworks plus the links currently present.

    Parameters
    ----------
    n : int
        Number of nodes, labelled ``0 .. n-1``.
    sides : tuple of int
        ``sides[v]`` is 1 if node ``v`` belongs to G1 and 2 if it belongs to G2.
    links : iterable of (int, int)
        Unordered node pairs.  Stored canonically with ``u < w`` and
        deduplicated.
    """

    n: int
    sides: tuple[int, ...]
    links: frozenset[Pair] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise StructuralError("topology needs at least one node")
        sides = tuple(int(s) for s in self.sides)
        if len(sides) != self.n:
            raise StructuralError(f"expected {self.n} side tags, got {len(sides)}")
        if any(s not in (1, 2) for s in sides):
            raise StructuralError("side tags must be 1 or 2")
        if self.n >= 2 and len(set(sides)) != 2:
            raise StructuralError("both subnetworks need at least one node")
        links = set()
        for u, w in self.links:
            pair = canonical_pair(u, w)
            if pair[0] < 0 or pair[1] >= self.n:
                raise StructuralError(f"link {pair} references a node outside [0, {self.n})")
            links.add(pair)
        object.__setattr__(self, "sides", sides)
        object.__setattr__(self, "links", frozenset(links))

    def with_links(self, extra: Iterable[Pair]) -> "Topology":
        return Topology(self.n, self.sides, self.links | {canonical_pair(u, w) for u, w in extra})

    def sorted_links(self) -> list[Pair]:
        return sorted(self.links)

    def kind(self, u: int, w: int) -> LinkKind:
        return link_kind(self.sides, u, w)


@dataclass(frozen=True)
class Link:
    """A candidate link with its owner and cost."""

    id: int
    u: int
    w: int
    kind: LinkKind
    cost: float
    owner: int

    def __post_init__(self):
        u, w = canonical_pair(self.u, self.w)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "kind", LinkKind(self.kind))
        if not np.isfinite(self.cost) or self.cost < 0:
            raise DomainError(f"link {self.id}: cost must be finite and >= 0, got {self.cost}")
        if self.owner not in (1, 2):
            raise DomainError(f"link {self.id}: owner must be 1 or 2")

    @property
    def pair(self) -> Pair:
        return (self.u, self.w)


def edge_laplacian(link: Union[Link, Pair], n: int) -> np.ndarray:
    """Rank-one Laplacian ``a_e a_e^T`` of a single link on ``n`` nodes."""
    u, w = link.pair if isinstance(link, Link) else canonical_pair(*link)
    if u < 0 or w >= n:
        raise StructuralError(f"link {(u, w)} out of range for n={n}")
    L = np.zeros((n, n))
    L[u, u] = L[w, w] = 1.0
    L[u, w] = L[w, u] = -1.0
    return L


def add_edge_(L: np.ndarray, u: int, w: int, weight: float = 1.0) -> None:
    """In-place ``L += weight * a_e a_e^T``."""
    L[u, u] += weight
    L[w, w] += weight
    L[u, w] -= weight
    L[w, u] -= weight


def laplacian_from_pairs(n: int, pairs: Iterable[Pair], weights=None) -> np.ndarray:
    L = np.zeros((n, n))
    if weights is None:
        for u, w in pairs:
            add_edge_(L, u, w)
    else:
        for (u, w), x in zip(pairs, weights):
            add_edge_(L, u, w, float(x))
    return L


def build_laplacian(
    topology: Topology,
    extra_weights: Mapping[Union[Link, Pair], float] | None = None,
) -> np.ndarray:
    """Assemble ``L = sum_e w_e a_e a_e^T``.

    Present links of ``topology`` carry weight 1.  ``extra_weights`` adds
    further links (keyed by :class:`Link` or node pair) with weights in
    ``[0, 1]``; binary and fractional weights are both accepted.
    """
    L = laplacian_from_pairs(topology.n, topology.links)
    if extra_weights:
        for key, x in extra_weights.items():
            x = float(x)
            if not (0.0 <= x <= 1.0):
                raise DomainError(f"link weight {x} outside [0, 1]")
            u, w = key.pair if isinstance(key, Link) else canonical_pair(*key)
            if u < 0 or w >= topology.n:
                raise StructuralError(f"link {(u, w)} out of range for n={topology.n}")
            add_edge_(L, u, w, x)
    return L


def components(n: int, pairs: Iterable[Pair]) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = n
    for u, w in pairs:
        ru, rw = find(u), find(w)
        if ru != rw:
            parent[ru] = rw
            count -= 1
    return count


def is_connected(topology: Topology) -> bool:
    return components(topology.n, topology.links) == 1
