#!/usr/bin/env python3
"""Cross-checks between the fast implementations and the brute-force oracle"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest
from hypothesis import HealthCheck, given, settings

from src.histories import generate_universe
from src.mutations import Mutation, mutated
from src.oracle import chain_search, check_universe, cross_check, naive_enabled, naive_post_states
from src.parser import parse_action
from src.transitions import apply, enabled_actions
from tests.strategies import bundled_model, models, states


@pytest.mark.parametrize("name,depth", [("virus", 2), ("epistemic", 2), ("merge_exit", 3), ("handshake", 2)])
def test_oracle_agrees_on_bundled_models(name, depth):
    assert check_universe(generate_universe(bundled_model(name), depth)) == []


def test_naive_rules_on_the_virus():
    model = bundled_model("virus")
    s0 = model.state("s0")
    enter = parse_action("(enter@A, accept@C, E)", model.agents)
    assert naive_enabled(s0) == {enter}
    assert naive_post_states(s0, enter) == {apply(s0, enter)}
    assert chain_search("A", "E", apply(s0, enter))


def test_oracle_reports_mutated_transitions():
    with mutated(Mutation.SKIP_SUM_CONSUMPTION):
        universe = generate_universe(bundled_model("handshake"), 1)
    found = check_universe(universe)
    assert {d.check for d in found} == {"transition"}


@settings(max_examples=60, deadline=None)
@given(states())
def test_enabled_sets_agree(state):
    """Forest-guided enumeration finds exactly the brute-force labels"""
    assert set(enabled_actions(state)) == naive_enabled(state)


@settings(max_examples=60, deadline=None)
@given(states())
def test_applied_state_is_an_allowed_outcome(state):
    for label in enabled_actions(state):
        assert apply(state, label) in naive_post_states(state, label)


def test_oracle_agrees_on_random_universes():
    """At least ten thousand fast-versus-oracle comparisons over random models"""
    queries = []

    @settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(models(min_agents=3, max_agents=4, max_states=2))
    def agrees(model):
        run = cross_check(generate_universe(model, 2))
        assert run.discrepancies == []
        queries.append(run.queries)

    agrees()
    assert sum(queries) >= 10_000


def test_cross_check_counts_every_comparison():
    universe = generate_universe(bundled_model("virus"), 1)
    run = cross_check(universe)
    reachable = universe.reachable_states()
    pairs = sum(len(s.agents) ** 2 for s in reachable)
    slices = sum(len(universe.slice(n)) ** 2 for n in range(universe.depth + 1))
    edges = sum(1 for _ in universe.edges())
    assert run.queries == 2 * pairs + len(reachable) + edges + len(universe.agents) * slices
    assert run.discrepancies == []
