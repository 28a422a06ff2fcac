#!/usr/bin/env python3
"""Tests for history universes, history equivalence and the history propositions"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest
from hypothesis import HealthCheck, assume, given, settings

from src.error_handler import BudgetExceeded, ConfigError, HistoryNotInUniverse, NotExecutable
from src.histories import (
    History, action_equiv, extend, follow_path, generate_universe, history_equiv,
    history_equiv_group, perfect_recall_failures, replay, subagent_mono_failures,
)
from src.mutations import Mutation, mutated
from src.parser import parse_action, parse_model
from tests.strategies import bundled_model, models

ENTER = "(enter@A, accept@C, E)"

LATE_ENTRY = """
agents A, B, D, E;
init s0  { E = B | A; B = enter.0 | D; A = accept.0; D = 0; }
init s0p { E = B | A; B = enter.D;     A = accept.0; D = 0; }
"""

SILENT_MERGE = """
agents A, C, D, E;
init s0 { E = A | C; A = merge+.0; C = merge-.0 | merge+.0; D = 0; }
init s1 { E = A | C; A = merge+.0; C = send(A <+ E).0; D = recv(A <+ E).0; }
"""


def test_virus_universe_counts():
    """One action is enabled, then none"""
    model = bundled_model("virus")
    assert generate_universe(model, 0).counts_per_length() == {0: 1}
    assert generate_universe(model, 1).counts_per_length() == {0: 1, 1: 1}
    assert generate_universe(model, 2).counts_per_length() == {0: 1, 1: 1, 2: 0}


def test_universe_without_capabilities():
    model = parse_model("agents A, E;\ninit s0 { E = A; A = 0; }\ninit s1 { E = 0; A = 0; }\n")
    universe = generate_universe(model, 3)
    assert len(universe) == 2
    assert universe.paths == ["s0", "s1"]


def test_universe_is_prefix_closed_and_replayable():
    universe = generate_universe(bundled_model("merge_exit"), 3)
    assert universe.paths == ["s0", "s0/0", "s0/0/0", "s0/0/0/0"]
    for index, history in enumerate(universe.histories):
        parent = universe.parents[index]
        if parent is not None:
            assert universe.histories[parent] == history.prefix(len(history) - 1)
        assert replay(universe, index) == history


def test_epistemic_universe():
    universe = generate_universe(bundled_model("epistemic"), 2)
    assert universe.counts_per_length() == {0: 2, 1: 1, 2: 0}
    assert universe.path_of(universe.slice(1)[0]) == "s0/0"


def test_extend_and_not_executable():
    model = bundled_model("virus")
    start = History((model.state("s0"),))
    entered = extend(start, parse_action(ENTER, model.agents))
    assert len(entered) == 1
    assert entered.last["C"].text == "A"
    with pytest.raises(NotExecutable):
        extend(entered, parse_action(ENTER, model.agents))


def test_depth_limits():
    model = bundled_model("virus")
    with pytest.raises(ConfigError):
        generate_universe(model, 7)
    with pytest.raises(ConfigError):
        generate_universe(model, -1)
    assert generate_universe(model, 7, depth_cap=8).depth == 7


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded) as caught:
        generate_universe(bundled_model("handshake"), 2, budget=2)
    assert caught.value.exit_code == 3


def test_resolve_and_follow_path():
    model = bundled_model("handshake")
    universe = generate_universe(model, 2)
    index = universe.resolve("s0/1")
    assert follow_path(model, "s0/1") == universe.histories[index]
    with pytest.raises(HistoryNotInUniverse):
        universe.resolve("s0/7")
    with pytest.raises(HistoryNotInUniverse):
        follow_path(model, "s9")
    with pytest.raises(HistoryNotInUniverse):
        follow_path(model, "s0/x")


def test_history_equiv_in_the_epistemic_model():
    """A cannot tell s0 from s0p, E can"""
    model = bundled_model("epistemic")
    universe = generate_universe(model, 1)
    s0 = universe.histories[universe.resolve("s0")]
    s0p = universe.histories[universe.resolve("s0p")]
    assert history_equiv("A", s0, s0p)
    assert not history_equiv("E", s0, s0p)
    assert history_equiv_group(["A", "C"], s0, s0p)
    assert not history_equiv_group(["A", "E"], s0, s0p)
    assert universe.equivalence_class("A", universe.resolve("s0")) == (0, 1)
    assert universe.group_class(["A", "E"], universe.resolve("s0")) == (0,)


def test_histories_of_different_size_are_distinguished():
    universe = generate_universe(bundled_model("virus"), 1)
    assert not history_equiv("A", universe.histories[0], universe.histories[1])


def test_action_equiv_follows_participation():
    model = bundled_model("handshake")
    s0 = model.state("s0")
    from_c = parse_action("(recv(C <+ E)@A, send(C <+ E)@C)", model.agents)
    from_d = parse_action("(recv(D <+ E)@A, send(D <+ E)@D)", model.agents)
    assert not action_equiv("A", s0, from_c, from_d)
    assert action_equiv("A", s0, from_c, from_c)
    assert not action_equiv("D", s0, from_c, from_d)
    assert action_equiv("A", s0, parse_action(ENTER, model.agents), parse_action("(enter@C, accept@A, E)", model.agents))


def test_handshake_runs_are_told_apart_by_actions():
    """Both runs leave A = 0; only the action it took part in differs"""
    universe = generate_universe(bundled_model("handshake"), 1)
    first, second = universe.slice(1)
    h, g = universe.histories[first], universe.histories[second]
    assert h.last["A"] == g.last["A"]
    assert not history_equiv("A", h, g)
    with mutated(Mutation.IGNORE_ACTIONS):
        assert history_equiv("A", h, g)


@pytest.mark.parametrize("name,depth", [("virus", 2), ("epistemic", 2), ("merge_exit", 3), ("handshake", 2)])
def test_history_propositions_hold_on_bundled_models(name, depth):
    universe = generate_universe(bundled_model(name), depth)
    checked, failures = perfect_recall_failures(universe)
    assert failures == []
    assert checked > 0
    assert subagent_mono_failures(universe)[1] == []


def test_perfect_recall_fails_without_actions():
    universe = generate_universe(bundled_model("handshake"), 2)
    with mutated(Mutation.IGNORE_ACTIONS):
        _, failures = perfect_recall_failures(universe, ["A"])
    assert failures
    assert failures[0].reason == "last actions differ"


def test_subagent_mono_fails_for_late_entry():
    """
    B enters A in both runs, but D sat beside B in one and inside B's
    continuation in the other: A cannot tell, B can
    """
    model = parse_model(LATE_ENTRY)
    universe = generate_universe(model, 1)
    first, second = universe.slice(1)
    h, g = universe.histories[first], universe.histories[second]
    assert history_equiv("A", h, g)
    assert not history_equiv("B", h, g)
    _, failures = subagent_mono_failures(universe, ["A"])
    assert any(f.subagent == "B" for f in failures)


def silent_step(universe):
    """Some edge leaves an executor's process as it was"""
    for source, label, target in universe.edges():
        before, after = universe.histories[source].last, universe.histories[target].last
        if any(before[x] == after[x] for x in (label.executor_a, label.executor_c)):
            return True
    return False


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
@given(models(max_agents=4, max_states=2))
def test_history_equiv_is_an_equivalence_per_slice(model):
    universe = generate_universe(model, 2)
    assume(not silent_step(universe))
    for size in range(universe.depth + 1):
        members = universe.slice(size)
        for observer in universe.agents:
            equiv = {(i, j): history_equiv(observer, universe.histories[i], universe.histories[j])
                     for i in members for j in members}
            for i in members:
                assert equiv[i, i]
                for j in members:
                    assert equiv[i, j] == equiv[j, i]
                    if not equiv[i, j]:
                        continue
                    for k in members:
                        if equiv[j, k]:
                            assert equiv[i, k]


def test_silent_merge_breaks_symmetry():
    """A merge that leaves A's process unchanged looks, from s1's side, like a step A took no part in"""
    universe = generate_universe(parse_model(SILENT_MERGE), 1)
    assert silent_step(universe)
    merged = universe.histories[universe.resolve("s0/0")]
    told = universe.histories[universe.resolve("s1/0")]
    assert merged.last["A"] == told.last["A"]
    assert history_equiv("A", told, merged)
    assert not history_equiv("A", merged, told)
