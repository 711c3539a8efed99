import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netgame.errors import DomainError
from netgame.graph import Link, LinkKind, Topology, build_laplacian
from netgame.spectral import lambda2, lambda2_supergradient, pair_supergradient
from oracles import dense_lambda2, laplacian


def complete(n):
    return list(itertools.combinations(range(n), 2))


def test_complete_graph_on_eight_nodes():
    # lambda2(K_n) = n; the fully connected 4+4 network reaches 8
    res = lambda2(laplacian(8, complete(8)))
    assert res.lambda2 == pytest.approx(8.0, abs=1e-10)


def test_disconnected_is_zero():
    res = lambda2(laplacian(4, [(0, 1), (2, 3)]))
    assert res.lambda2 == pytest.approx(0.0, abs=1e-12)
    assert res.multiplicity_gap > 1.0


def test_path_of_three():
    L = laplacian(3, [(0, 1), (1, 2)])
    assert lambda2(L).lambda2 == pytest.approx(dense_lambda2(L), abs=1e-12)
    assert lambda2(L).lambda2 == pytest.approx(1.0, abs=1e-12)


def test_single_node_pair():
    assert lambda2(laplacian(2, [(0, 1)])).lambda2 == pytest.approx(2.0)


@pytest.mark.parametrize("L", [
    np.array([[1.0, -1.0], [0.0, 0.0]]),
    np.array([[1.0, 0.0], [0.0, 1.0]]),
    np.zeros((2, 3)),
    np.zeros((1, 1)),
])
def test_domain_errors(L):
    with pytest.raises(DomainError):
        lambda2(L)


def test_multiplicity_reported_for_complete_graph():
    res = lambda2(laplacian(5, complete(5)))
    assert res.multiplicity_gap < 1e-9
    assert not res.is_simple


def test_supergradient_map_keys_and_values():
    L = laplacian(3, [(0, 1), (1, 2)])
    links = [Link(0, 0, 2, LinkKind.CROSS, 1.0, 1), Link(1, 0, 1, LinkKind.WITHIN_G1, 1.0, 1)]
    g = lambda2_supergradient(L, links)
    # Fiedler vector of P3 is (1, 0, -1)/sqrt2
    assert g[0] == pytest.approx(2.0)
    assert g[1] == pytest.approx(0.5)


graphs = st.integers(3, 9).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.floats(0.0, 1.0), min_size=n * (n - 1) // 2,
                                             max_size=n * (n - 1) // 2))
)


def weighted(n, ws):
    return laplacian(n, complete(n), ws)


@settings(max_examples=80, deadline=None)
@given(graphs)
def test_eigenpair_contract(arg):
    n, ws = arg
    L = weighted(n, ws)
    res = lambda2(L)
    v = res.fiedler
    assert res.lambda2 == pytest.approx(dense_lambda2(L), abs=1e-9)
    assert res.lambda2 >= 0.0
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
    assert abs(v.sum()) < 1e-9
    assert np.linalg.norm(L @ v - res.lambda2 * v) < 1e-8
    first = v[np.abs(v) > 1e-10][0]
    assert first > 0
    assert res.multiplicity_gap >= 0


@settings(max_examples=80, deadline=None)
@given(graphs, graphs)
def test_concavity_and_supergradient_inequality(a, b):
    n = min(a[0], b[0])
    m = n * (n - 1) // 2
    x, y = np.array(a[1][:m]), np.array(b[1][:m])
    lx, ly = lambda2(weighted(n, x)), lambda2(weighted(n, y))
    mid = lambda2(weighted(n, (x + y) / 2)).lambda2
    assert mid >= (lx.lambda2 + ly.lambda2) / 2 - 1e-9
    us, ws = np.array(complete(n)).T
    g = pair_supergradient(lx.fiedler, us, ws)
    assert ly.lambda2 <= lx.lambda2 + g @ (y - x) + 1e-9


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 9).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.sampled_from(complete(n))), st.sampled_from(complete(n))))
)
def test_adding_a_link_never_lowers_lambda2(arg):
    n, pairs, extra = arg
    t = Topology(n, (1,) + (2,) * (n - 1), frozenset(pairs))
    before = lambda2(build_laplacian(t)).lambda2
    after = lambda2(build_laplacian(t.with_links([extra]))).lambda2
    assert after >= before - 1e-10


@settings(max_examples=80, deadline=None)
@given(graphs)
def test_fiedler_degree_bound(arg):
    # lambda2 <= n/(n-1) * minimum weighted degree
    n, ws = arg
    L = weighted(n, ws)
    assert lambda2(L).lambda2 <= n / (n - 1) * np.diag(L).min() + 1e-9
