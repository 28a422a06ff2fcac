#!/usr/bin/env python3
"""Tests for the four transition rules, enabled actions and participation"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest
from hypothesis import given, settings, strategies as st

from src.error_handler import ErrorType, NotExecutable, SharedOccurrence
from src.mutations import Mutation, mutated
from src.parser import parse_action, parse_process
from src.state_model import forest_of, subagent_iter, subagent_one_step, validate_state
from src.syntax import ActionKind
from src.transitions import apply, enabled_actions, executable, find_redexes, fire, participates
from tests.strategies import bundled_model, states

ENTER = "(enter@A, accept@C, E)"
EXIT = "(exit@A, expel@C, E)"
MERGE = "(merge+@A, merge-@C, E)"
TELL = "(recv(A <+ E)@D, send(A <+ E)@A)"


def build(**processes):
    return validate_state({agent: parse_process(text) for agent, text in processes.items()},
                          sorted(processes))


def texts(state):
    return {agent: process.text for agent, process in state.assignment}


def label(text, agents=("A", "B", "C", "D", "E")):
    return parse_action(text, agents)


def test_enter_moves_the_virus_into_the_cell():
    """Type II: A leaves E's top level and becomes a child of C"""
    s0 = bundled_model("virus").state("s0")
    s1 = apply(s0, label(ENTER))
    assert texts(s1) == {"A": "0", "C": "A", "E": "C"}
    assert subagent_one_step("A", "C", s1)
    assert subagent_iter("A", "E", s1)


def test_enter_keeps_the_rest_of_the_mediator():
    state = build(E="A | C | B | accept.0", A="enter.exit.0", C="accept.0 | expel.0", B="0")
    after = apply(state, label(ENTER))
    assert texts(after) == {"A": "exit.0", "B": "0", "C": "A | expel.0", "E": "B | C | accept.0"}


def test_merge_exit_chain():
    """Type III, then Type IV, then Type I on the merge_exit model"""
    s0 = bundled_model("merge_exit").state("s0")
    assert [l.text for l in enabled_actions(s0)] == [EXIT]

    s1 = apply(s0, label(EXIT))
    assert texts(s1) == {"A": "merge+.send(A <+ E).0", "C": "merge-.0", "D": "recv(A <+ E).0",
                         "E": "A | C | D"}
    assert [l.text for l in enabled_actions(s1)] == [MERGE]

    s2 = apply(s1, label(MERGE))
    assert texts(s2) == {"A": "send(A <+ E).0", "C": "0", "D": "recv(A <+ E).0", "E": "A | D"}
    assert [l.text for l in enabled_actions(s2)] == [TELL]

    s3 = apply(s2, label(TELL))
    assert texts(s3) == {"A": "0", "C": "0", "D": "0", "E": "A | D"}
    assert enabled_actions(s3) == []


def test_merge_moves_children_of_the_merged_agent():
    state = build(E="A | C", A="merge+.0", C="B | merge-.0", B="0")
    after = apply(state, label(MERGE))
    assert texts(after) == {"A": "B", "B": "0", "C": "0", "E": "A"}


def test_communication_consumes_the_whole_sum():
    s0 = bundled_model("handshake").state("s0")
    enabled = [l.text for l in enabled_actions(s0)]
    assert enabled == ["(recv(C <+ E)@A, send(C <+ E)@C)", "(recv(D <+ E)@A, send(D <+ E)@D)"]
    after = apply(s0, enabled_actions(s0)[0])
    assert after["A"].text == "0"
    assert after["C"].text == "0"
    assert after["D"].text == "send(D <+ E).0"


@pytest.mark.parametrize("text", [
    "(enter@A, accept@C, D)",          # wrong mediator
    "(exit@A, expel@C, E)",            # A is not inside C
    "(enter@C, accept@A, E)",          # roles swapped
    "(merge+@A, merge-@C, E)",         # no merge capabilities
])
def test_not_executable(text):
    s0 = bundled_model("virus").state("s0")
    agents = ("A", "C", "D", "E")
    assert not executable(s0, label(text, agents))
    with pytest.raises(NotExecutable):
        apply(s0, label(text, agents))


def test_exit_needs_the_host_under_the_mediator():
    state = build(E="D", D="C", C="A | expel.0", A="exit.0")
    assert not executable(state, label(EXIT))
    assert executable(state, label("(exit@A, expel@C, D)"))


def test_enabled_actions_use_the_actual_parent():
    """Siblings under the same parent are the only Type II partners"""
    state = build(E="A | B", B="C", A="enter.0", C="accept.0", D="accept.0")
    assert enabled_actions(state) == []
    sibling = build(E="A | C | D", A="enter.0", C="accept.0", D="accept.0", B="0")
    assert [l.text for l in enabled_actions(sibling)] == [ENTER, "(enter@A, accept@D, E)"]


def test_ambiguous_redex_applies_the_least():
    """Two enter alternatives with different continuations"""
    state = build(E="A | C", A="enter.0 + enter.exit.0", C="accept.0")
    result = fire(state, label(ENTER))
    assert result.ambiguous
    assert len(result.alternatives) == 2
    assert result.state["A"].text == "0"
    assert apply(state, label(ENTER)) == result.state
    diagnostic = result.diagnostic(label(ENTER))
    assert diagnostic.error_type is ErrorType.AMBIGUOUS_REDEX


def test_identical_sums_are_not_ambiguous():
    state = build(E="A | C", A="enter.0 | enter.0", C="accept.0")
    assert len(find_redexes(state, label(ENTER))) == 1
    result = fire(state, label(ENTER))
    assert not result.ambiguous
    assert result.diagnostic(label(ENTER)) is None
    assert result.state["A"].text == "enter.0"


def test_participation():
    state = build(E="A | C", A="enter.0", C="accept.0", B="0")
    enter = label(ENTER)
    assert participates("A", state, enter)
    assert participates("C", state, enter)
    assert participates("E", state, enter)
    assert not participates("B", state, enter)
    assert not participates("E", state, label("(enter@C, accept@A, E)"))


def test_drop_mediator_update_breaks_validity():
    s0 = bundled_model("virus").state("s0")
    with mutated(Mutation.DROP_MEDIATOR_UPDATE):
        after = apply(s0, label(ENTER))
    assert after["E"].agents == ("A", "C")
    with pytest.raises(SharedOccurrence):
        validate_state(after.as_dict(), after.agents)


def test_keep_merged_in_mediator():
    s1 = apply(bundled_model("merge_exit").state("s0"), label(EXIT))
    with mutated(Mutation.KEEP_MERGED_IN_MEDIATOR):
        after = apply(s1, label(MERGE))
    assert after["E"].agents == ("A", "C", "D")
    assert after["C"].is_zero


def test_skip_sum_consumption():
    s0 = bundled_model("handshake").state("s0")
    first = enabled_actions(s0)[0]
    with mutated(Mutation.SKIP_SUM_CONSUMPTION):
        after = apply(s0, first)
    assert after["A"] == s0["A"]
    assert after["C"] == s0["C"]


@settings(max_examples=60, deadline=None)
@given(states())
def test_rules_preserve_validity_and_frame(state):
    """Post-states are valid and only the named agents change"""
    for enabled in enabled_actions(state):
        after = apply(state, enabled)
        validate_state(after.as_dict(), state.agents)
        for agent in state.agents:
            if agent not in enabled.agents:
                assert after[agent] == state[agent]


@settings(max_examples=60, deadline=None)
@given(states())
def test_every_enabled_action_is_executable(state):
    for enabled in enabled_actions(state):
        assert executable(state, enabled)
        assert participates(enabled.executor_a, state, enabled)


def expected_parents(state, enabled, redex):
    """Parent map after one step: the rule's edge moves plus agents released by the continuations"""
    a, c, e = enabled.executor_a, enabled.executor_c, enabled.mediator
    parent = dict(forest_of(state).parent)
    if enabled.kind is ActionKind.II:
        parent[a] = c
    elif enabled.kind is ActionKind.III:
        parent[a] = e
    elif enabled.kind is ActionKind.IV:
        parent.pop(c)
        parent.update({child: a for child, owner in parent.items() if owner == c})
    for released in redex.alt_a.continuation.agents:
        parent[released] = a
    for released in redex.alt_c.continuation.agents:
        parent[released] = a if enabled.kind is ActionKind.IV else c
    return parent


@settings(max_examples=80, deadline=None)
@given(states())
def test_forest_changes_by_rule_type(state):
    """I keeps the forest, II and III move one edge, IV removes C under A"""
    for enabled in enabled_actions(state):
        redex = find_redexes(state, enabled)[0]
        after = forest_of(apply(state, enabled))
        assert after.parent == expected_parents(state, enabled, redex)
        if enabled.kind is ActionKind.IV:
            assert enabled.executor_c in after.roots


@st.composite
def enter_then_exit(draw):
    """A and C side by side in E, A able to enter C and leave again"""
    extras = draw(st.lists(st.sampled_from(["B", "D"]), unique=True))
    home = {extra: draw(st.sampled_from(["A", "C", "E"])) for extra in extras}

    processes = {}
    for owner, own in (("A", "enter.exit.0"), ("C", "accept.expel.0"), ("E", "A | C")):
        processes[owner] = " | ".join([own] + [extra for extra in extras if home[extra] == owner])
    processes.update({extra: "0" for extra in extras})
    if draw(st.booleans()):
        processes["R"] = "E"
    return build(**processes)


@settings(max_examples=40, deadline=None)
@given(enter_then_exit())
def test_exit_undoes_enter_on_the_forest(state):
    before = forest_of(state)
    inside = apply(state, label(ENTER, state.agents))
    assert forest_of(inside).parent["A"] == "C"
    back = apply(inside, label(EXIT, state.agents))
    assert forest_of(back).parent == before.parent
    assert forest_of(back).roots == before.roots
