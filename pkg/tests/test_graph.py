import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netgame.errors import DomainError, StructuralError
from netgame.graph import (
    Link, LinkKind, Topology, build_laplacian, canonical_pair, components, edge_laplacian, is_connected,
    link_kind,
)
from oracles import laplacian


def test_canonical_pair_orders_and_rejects_loops():
    assert canonical_pair(3, 1) == (1, 3)
    with pytest.raises(StructuralError):
        canonical_pair(2, 2)


def test_link_kinds():
    sides = (1, 1, 2, 2)
    assert link_kind(sides, 0, 1) is LinkKind.WITHIN_G1
    assert link_kind(sides, 2, 3) is LinkKind.WITHIN_G2
    assert link_kind(sides, 1, 2) is LinkKind.CROSS


@pytest.mark.parametrize("kwargs", [
    dict(n=3, sides=(1, 2), links=frozenset()),
    dict(n=3, sides=(1, 3, 2), links=frozenset()),
    dict(n=3, sides=(1, 1, 2), links=frozenset({(0, 3)})),
    dict(n=3, sides=(1, 1, 2), links=frozenset({(1, 1)})),
])
def test_topology_rejects_malformed(kwargs):
    with pytest.raises(StructuralError):
        Topology(**kwargs)


def test_topology_canonicalises_links():
    t = Topology(3, (1, 1, 2), frozenset({(1, 0), (0, 1), (2, 1)}))
    assert t.sorted_links() == [(0, 1), (1, 2)]


def test_link_validation():
    with pytest.raises((DomainError, StructuralError, ValueError)):
        Link(0, 0, 1, LinkKind.WITHIN_G1, -1.0, 1)
    with pytest.raises((DomainError, StructuralError, ValueError)):
        Link(0, 0, 1, LinkKind.WITHIN_G1, 1.0, 3)


def test_edge_laplacian_is_rank_one():
    A = edge_laplacian((0, 2), 3)
    a = np.array([1.0, 0.0, -1.0])
    np.testing.assert_array_equal(A, np.outer(a, a))


def test_build_laplacian_fractional_weights():
    t = Topology(3, (1, 1, 2), frozenset({(0, 1)}))
    L = build_laplacian(t, {(1, 2): 0.25})
    np.testing.assert_allclose(L, laplacian(3, [(0, 1), (1, 2)], [1.0, 0.25]))
    with pytest.raises(DomainError):
        build_laplacian(t, {(1, 2): 1.5})


def test_components_counts():
    assert components(4, [(0, 1), (2, 3)]) == 2
    assert components(4, [(0, 1), (1, 2), (2, 3)]) == 1
    assert not is_connected(Topology(4, (1, 1, 2, 2), frozenset({(0, 1), (2, 3)})))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.sampled_from(list(itertools.combinations(range(n), 2))))))
)
def test_laplacian_properties(arg):
    n, pairs = arg
    t = Topology(n, (1,) + (2,) * (n - 1), frozenset(pairs))
    L = build_laplacian(t)
    np.testing.assert_allclose(L, L.T)
    np.testing.assert_allclose(L.sum(axis=1), 0.0, atol=1e-12)
    np.testing.assert_allclose(L, laplacian(n, sorted(pairs)))
    assert np.linalg.eigvalsh(L).min() > -1e-10
