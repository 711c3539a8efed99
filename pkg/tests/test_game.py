import math

import numpy as np
import pytest

from netgame.errors import ConstraintError, StructuralError
from netgame.game import (
    GameState, LinkCatalog, PlayerSpec, Strategy, canonical_step_problem, induced_topology,
    make_strategy, team_problem, validate_strategy, within_budget,
)
from netgame.graph import Topology
from oracles import laplacian

TOPO = Topology(4, (1, 1, 2, 2), frozenset({(0, 1), (2, 3)}))
ENTRIES = [(0, 2, 1, 1.0), (1, 3, 2, 2.0), (0, 3, 1, 3.0), (1, 2, 2, 0.5)]


def catalog():
    return LinkCatalog.build(TOPO, ENTRIES)


def specs(q1=1, q2=1, b1=math.inf, b2=math.inf):
    cat = catalog()
    return cat, (PlayerSpec.for_catalog(cat, 1, b1, q1), PlayerSpec.for_catalog(cat, 2, b2, q2))


def test_catalog_ownership_rules():
    with pytest.raises(StructuralError):
        LinkCatalog.build(TOPO, [(0, 1, 2, 1.0)])  # within G1 owned by player 2
    with pytest.raises(StructuralError):
        LinkCatalog.build(TOPO, [(2, 3, 1, 1.0)])
    with pytest.raises(StructuralError):
        LinkCatalog.build(TOPO, [(0, 2, 1, 1.0), (2, 0, 2, 1.0)])  # duplicate pair
    with pytest.raises(StructuralError):
        LinkCatalog.build(TOPO, [(0, 9, 1, 1.0)])
    cat = catalog()
    assert cat.owned(1) == (0, 2)
    assert cat.owned(2) == (1, 3)


def test_player_spec_constraints():
    cat = catalog()
    with pytest.raises(ConstraintError):
        PlayerSpec.for_catalog(cat, 1, 10.0, 3)  # owns only two
    with pytest.raises(ConstraintError):
        PlayerSpec.for_catalog(cat, 1, 3.9, 2)  # cheapest pair costs 4
    with pytest.raises(ConstraintError):
        PlayerSpec.for_catalog(cat, 1, -1.0, 0)
    with pytest.raises(ConstraintError):
        PlayerSpec.for_catalog(cat, 3, 1.0, 0)
    s = PlayerSpec.for_catalog(cat, 1, 4.0, 2)
    assert s.min_cost() == 4.0
    assert s.min_cost_selection() == (0, 2)


def test_budget_tolerance_is_relative():
    assert within_budget(0.1 + 0.2, 0.3)
    assert not within_budget(0.3001, 0.3)
    assert within_budget(5.0, math.inf)


def test_validate_strategy_reports_each_violation():
    cat, (s1, _) = specs(q1=1, b1=1.5)
    problems = validate_strategy(s1, cat, Strategy(1, (1, 2)))
    kinds = {p.split(":")[0] for p in problems}
    assert kinds == {"ownership", "quota", "budget"}
    assert validate_strategy(s1, cat, Strategy(1, (0,))) == []
    with pytest.raises(ConstraintError):
        make_strategy(s1, cat, [2])
    assert "player" in validate_strategy(s1, cat, Strategy(2, (0,)))[0]


def test_game_state_defaults_to_cheapest():
    cat, sp = specs(q1=1, q2=1)
    st = GameState(TOPO, cat, sp)
    assert st.strategy(1).selected == (0,)
    assert st.strategy(2).selected == (3,)
    assert induced_topology(st).links == TOPO.links | {(0, 2), (1, 2)}


def test_game_state_rejects_bad_initial():
    cat, sp = specs(q1=1, q2=1)
    with pytest.raises(ConstraintError):
        GameState(TOPO, cat, sp, (Strategy(1, (1,)), Strategy(2, (3,))))


def test_step_problem_fixes_opponent_links():
    cat, sp = specs(q1=1, q2=1)
    st = GameState(TOPO, cat, sp)
    prob = canonical_step_problem(st, 1)
    assert prob.fixed_pairs == TOPO.links | {(1, 2)}
    np.testing.assert_allclose(prob.fixed, laplacian(4, sorted(prob.fixed_pairs)))
    assert len(prob.blocks) == 1
    b = prob.blocks[0]
    assert b.link_ids == (0, 2) and b.quota == 1
    with pytest.raises(ConstraintError):
        canonical_step_problem(st, 3)


def test_links_already_present_are_inert():
    topo = Topology(4, (1, 1, 2, 2), frozenset({(0, 1), (2, 3), (0, 2)}))
    cat = LinkCatalog.build(topo, ENTRIES)
    sp = (PlayerSpec.for_catalog(cat, 1, math.inf, 1), PlayerSpec.for_catalog(cat, 2, math.inf, 0))
    prob = canonical_step_problem(GameState(topo, cat, sp), 1)
    b = prob.blocks[0]
    assert b.us[0] == b.ws[0]  # link 0 duplicates a base link
    L = prob.laplacian(np.array([1.0, 0.0]))
    np.testing.assert_allclose(L, prob.fixed)


def test_team_problem_and_restrict():
    cat, sp = specs(q1=2, q2=1, b1=5.0)
    prob = team_problem(TOPO, cat, sp)
    assert [b.player for b in prob.blocks] == [1, 2]
    assert prob.m == 4
    r = prob.restrict({0: [1]})  # fix link 2 (cost 3) for player 1
    assert r.blocks[0].quota == 1
    assert r.blocks[0].budget == pytest.approx(2.0)
    assert r.blocks[0].link_ids == (0,)
    assert (0, 3) in r.fixed_pairs
    np.testing.assert_allclose(r.fixed, laplacian(4, sorted(r.fixed_pairs)))


def test_instances_compare_by_value():
    cat, sp = specs()
    st = GameState(TOPO, cat, sp)
    assert canonical_step_problem(st, 1) == canonical_step_problem(st, 1)
    assert hash(canonical_step_problem(st, 1)) == hash(canonical_step_problem(st, 1))
    assert canonical_step_problem(st, 1) != canonical_step_problem(st, 2)
