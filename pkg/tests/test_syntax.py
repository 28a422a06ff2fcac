#!/usr/bin/env python3
"""Tests for processes, action labels and formula desugaring"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest
from hypothesis import given, settings, strategies as st

from src.error_handler import MalformedTerm, UndeclaredAgent
from src.syntax import (
    ActionKind, AgentRef, And, Bottom, Box, Capability, CapKind, Diamond, DistKnows, Implies,
    Knows, Not, Or, Prefixed, Process, Subagent, SubagentPlus, Sum, Top, ZERO, action,
    box_depth, desugar, fixed_atom, is_core, normalize, occurrences, one_step, render_formula,
    Par, RawPrefix, Choice,
)
from tests.strategies import raw_occurrences, raw_processes, reshuffle

AGENTS = ["A", "C", "E"]


def prefixed(kind, continuation=ZERO, payload=None):
    return Prefixed(Capability(kind, payload), continuation)


def test_parallel_composition_is_a_multiset():
    """Order and nesting of | do not matter; 0 is the unit"""
    enter = Sum((prefixed(CapKind.ENTER),))
    left = Process.par(AgentRef("A"), Process.par(enter, AgentRef("C")))
    right = Process.par(Process.par(AgentRef("C"), enter), AgentRef("A"), ZERO)
    assert left == right
    assert left.text == "A | C | enter.0"


def test_sum_alternatives_are_canonically_ordered():
    exit_first = Sum((prefixed(CapKind.EXIT), prefixed(CapKind.ACCEPT)))
    accept_first = Sum((prefixed(CapKind.ACCEPT), prefixed(CapKind.EXIT)))
    assert exit_first == accept_first
    assert exit_first.text == "accept.0 + exit.0"


def test_sum_keeps_duplicate_alternatives():
    twice = Sum((prefixed(CapKind.ENTER), prefixed(CapKind.ENTER)))
    assert len(twice.alternatives) == 2
    assert twice != Sum((prefixed(CapKind.ENTER),))


def test_empty_sum_is_rejected():
    with pytest.raises(MalformedTerm):
        Sum(())


def test_capability_payload_rules():
    with pytest.raises(MalformedTerm):
        Capability(CapKind.RECV)
    with pytest.raises(MalformedTerm):
        Capability(CapKind.ENTER, SubagentPlus("A", "C"))
    assert Capability(CapKind.SEND, SubagentPlus("A", "C")).text == "send(A <+ C)"


def test_continuation_text_parenthesizes_compound_processes():
    inner = Process.par(AgentRef("A"), Sum((prefixed(CapKind.ACCEPT),)))
    assert prefixed(CapKind.ENTER, inner).text == "enter.(A | accept.0)"
    chained = Process((Sum((prefixed(CapKind.MERGE_MINUS),)),))
    assert prefixed(CapKind.EXPEL, chained).text == "expel.merge-.0"


def test_normalize_flattens_raw_terms():
    raw = Par((Par(("A",)), Choice((RawPrefix(Capability(CapKind.ENTER), Par(())),)), Par(())))
    assert normalize(raw).text == "A | enter.0"


@settings(max_examples=150, deadline=None)
@given(raw_processes(AGENTS))
def test_normalize_is_idempotent(raw):
    once = normalize(raw)
    assert normalize(once) == once
    assert normalize(Par((raw, Par(())))) == once


@settings(max_examples=150, deadline=None)
@given(raw_processes(AGENTS), st.randoms(use_true_random=False))
def test_normalize_ignores_order_and_grouping(raw, rnd):
    """Permuting and regrouping | and permuting + give the same canonical process"""
    shuffled = reshuffle(raw, rnd)
    assert normalize(shuffled) == normalize(raw)
    assert normalize(shuffled).text == normalize(raw).text


@settings(max_examples=150, deadline=None)
@given(raw_processes(AGENTS))
def test_normalize_preserves_occurrences(raw):
    assert sorted(occurrences(normalize(raw))) == sorted(raw_occurrences(raw))


def test_occurrences_counts_agents_under_prefixes():
    process = Process.par(AgentRef("A"), Sum((prefixed(CapKind.ENTER, Process((AgentRef("C"),))),)))
    assert occurrences(process) == ["A", "C"]


def test_action_label_text_and_kind():
    label = action(CapKind.ENTER, "A", CapKind.ACCEPT, "C", "E")
    assert label.text == "(enter@A, accept@C, E)"
    assert label.kind is ActionKind.II
    assert label.agents == ("A", "C", "E")


@pytest.mark.parametrize("build", [
    lambda: action(CapKind.ENTER, "A", CapKind.EXPEL, "C", "E"),
    lambda: action(CapKind.ACCEPT, "A", CapKind.ENTER, "C", "E"),
    lambda: action(CapKind.ENTER, "A", CapKind.ACCEPT, "A", "E"),
    lambda: action(CapKind.ENTER, "A", CapKind.ACCEPT, "C"),
    lambda: action(CapKind.ENTER, "A", CapKind.ACCEPT, "C", "A"),
    lambda: action(Capability(CapKind.RECV, SubagentPlus("A", "C")), "A",
                   Capability(CapKind.SEND, SubagentPlus("C", "A")), "C"),
    lambda: action(Capability(CapKind.RECV, SubagentPlus("A", "C")), "A",
                   Capability(CapKind.SEND, SubagentPlus("A", "C")), "C", "E"),
])
def test_malformed_action_labels(build):
    """Duality, distinct executors, mediator presence and payload equality"""
    with pytest.raises(MalformedTerm):
        build()


def test_label_order_is_type_then_text():
    merge = action(CapKind.MERGE_PLUS, "A", CapKind.MERGE_MINUS, "C", "E")
    enter = action(CapKind.ENTER, "C", CapKind.ACCEPT, "A", "E")
    recv = action(Capability(CapKind.RECV, SubagentPlus("A", "C")), "E",
                  Capability(CapKind.SEND, SubagentPlus("A", "C")), "A")
    assert sorted([merge, enter, recv], key=lambda l: l.sort_key()) == [recv, enter, merge]


def test_truth_constants_use_the_least_agent():
    assert fixed_atom(["E", "C", "A"]) == SubagentPlus("A", "A")
    assert desugar(Top(), AGENTS) == Not(And(Not(SubagentPlus("A", "A")), Not(Not(SubagentPlus("A", "A")))))
    assert desugar(Bottom(), AGENTS) == And(SubagentPlus("A", "A"), Not(SubagentPlus("A", "A")))


def test_implication_is_material():
    p, q = SubagentPlus("A", "C"), SubagentPlus("C", "E")
    assert desugar(Implies(p, q), AGENTS) == Not(And(Not(Not(p)), Not(q)))
    assert (p >> q) == desugar(Implies(p, q), AGENTS)
    assert (p | q) == desugar(Or(p, q), AGENTS)


def test_one_step_excludes_intermediates():
    expected = And(SubagentPlus("A", "E"), Not(And(SubagentPlus("A", "C"), SubagentPlus("C", "E"))))
    assert one_step("A", "E", AGENTS) == expected
    assert desugar(Subagent("A", "E"), AGENTS) == expected


def test_diamond_is_dual_of_box():
    label = action(CapKind.ENTER, "A", CapKind.ACCEPT, "C", "E")
    p = SubagentPlus("A", "C")
    assert desugar(Diamond(label, p), AGENTS) == Not(Box(label, Not(p)))


def test_desugar_rejects_unknown_agents():
    with pytest.raises(UndeclaredAgent):
        desugar(Knows("Z", SubagentPlus("A", "C")), AGENTS)
    with pytest.raises(UndeclaredAgent):
        desugar(Box(action(CapKind.ENTER, "A", CapKind.ACCEPT, "C", "Q"), Top()), AGENTS)


def test_distributed_knowledge_group_is_sorted_set():
    assert DistKnows(("E", "A", "E"), SubagentPlus("A", "C")).agents == ("A", "E")
    with pytest.raises(MalformedTerm):
        DistKnows((), SubagentPlus("A", "C"))


def test_box_depth_and_core_check():
    label = action(CapKind.ENTER, "A", CapKind.ACCEPT, "C", "E")
    nested = Knows("A", Box(label, Not(Box(label, SubagentPlus("A", "C")))))
    assert box_depth(nested) == 2
    assert is_core(nested)
    assert not is_core(Implies(SubagentPlus("A", "C"), SubagentPlus("C", "E")))


def test_render_formula():
    label = action(CapKind.ENTER, "A", CapKind.ACCEPT, "C", "E")
    formula = And(Knows("C", SubagentPlus("A", "C")), DistKnows(("E", "A"), Not(Box(label, SubagentPlus("A", "C")))))
    assert render_formula(formula) == "(K[C](A <+ C) & DK[A, E]~[(enter@A, accept@C, E)](A <+ C))"
