"""
Transition Rules
Redex discovery, deterministic application, enabled-action enumeration and
participation for the four action types
"""

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from src.error_handler import ErrorContext, ErrorSeverity, ErrorType, MalformedTerm, NotExecutable
from src.mutations import Mutation, is_active
from src.state_model import State, subagent_refl
from src.syntax import (
    DUALS, ActionKind, ActionLabel, AgentRef, Capability, Prefixed, Process, Sum,
    ZERO, is_top_level_agent,
)


@dataclass(frozen=True)
class Redex:
    """
    Decomposition witness for one rule application.

    s(A) = sum_a | rest_a with alt_a in sum_a, likewise for C; rest_e is the
    mediator remainder for Types II-IV. For Type III rest_c excludes A.
    """
    sum_a: Sum
    alt_a: Prefixed
    rest_a: Process
    sum_c: Sum
    alt_c: Prefixed
    rest_c: Process
    rest_e: Optional[Process] = None

    def sort_key(self) -> Tuple[str, str, str, str]:
        return (self.sum_a.text, self.alt_a.text, self.sum_c.text, self.alt_c.text)

    def pre_assignments(self, label: ActionLabel) -> Dict[str, Process]:
        """Rebuild the matched part of the pre-state"""
        a, c, e = label.executor_a, label.executor_c, label.mediator
        rebuilt = {a: Process.par(self.sum_a, self.rest_a)}
        if label.kind is ActionKind.III:
            rebuilt[c] = Process.par(self.sum_c, AgentRef(a), self.rest_c)
            rebuilt[e] = Process.par(AgentRef(c), self.rest_e)
        else:
            rebuilt[c] = Process.par(self.sum_c, self.rest_c)
            if label.kind.mediated:
                rebuilt[e] = Process.par(AgentRef(a), AgentRef(c), self.rest_e)
        return rebuilt


@dataclass(frozen=True)
class StepResult:
    state: State
    redex: Redex
    alternatives: Tuple[State, ...]

    @property
    def ambiguous(self) -> bool:
        return len(self.alternatives) > 1

    def diagnostic(self, label: ActionLabel) -> Optional[ErrorContext]:
        if not self.ambiguous:
            return None
        return ErrorContext(
            error_type=ErrorType.AMBIGUOUS_REDEX,
            severity=ErrorSeverity.LOW,
            message=f"{label.text} has {len(self.alternatives)} distinct outcomes; applied the first",
            details={"post_states": [str(s) for s in self.alternatives]},
        )


def _decompose(process: Process, capability: Capability) -> Iterator[Tuple[Sum, Prefixed, Process]]:
    """Every (sum, alternative, remainder) with the alternative guarded by capability"""
    seen_sums = []
    for component in process.sums:
        if component in seen_sums:
            continue
        seen_sums.append(component)
        rest = process.without(component)
        for alt in dict.fromkeys(component.offering(capability)):
            yield component, alt, rest


def find_redexes(state: State, label: ActionLabel) -> List[Redex]:
    """All decompositions matching the rule premises, in canonical order"""
    a, c, e = label.executor_a, label.executor_c, label.mediator
    if any(agent not in state.agents for agent in label.agents):
        return []

    gamma: Optional[Process] = None
    side_c = state[c]
    if label.kind in (ActionKind.II, ActionKind.IV):
        if not (is_top_level_agent(a, state[e]) and is_top_level_agent(c, state[e])):
            return []
        gamma = state[e].without(AgentRef(a)).without(AgentRef(c))
    elif label.kind is ActionKind.III:
        if not (is_top_level_agent(c, state[e]) and is_top_level_agent(a, state[c])):
            return []
        gamma = state[e].without(AgentRef(c))
        side_c = state[c].without(AgentRef(a))

    redexes = set()
    for sum_a, alt_a, rest_a in _decompose(state[a], label.cap_a):
        for sum_c, alt_c, rest_c in _decompose(side_c, label.cap_c):
            redexes.add(Redex(sum_a, alt_a, rest_a, sum_c, alt_c, rest_c, gamma))
    return sorted(redexes, key=Redex.sort_key)


def post_assignments(label: ActionLabel, redex: Redex) -> Dict[str, Process]:
    """New processes for the agents the rule names; all others keep theirs"""
    a, c, e = label.executor_a, label.executor_c, label.mediator
    p, q = redex.alt_a.continuation, redex.rest_a
    r, s = redex.alt_c.continuation, redex.rest_c
    gamma = redex.rest_e

    if label.kind is ActionKind.I:
        if is_active(Mutation.SKIP_SUM_CONSUMPTION):
            return {a: Process.par(redex.sum_a, p, q), c: Process.par(redex.sum_c, r, s)}
        return {a: Process.par(p, q), c: Process.par(r, s)}

    if label.kind is ActionKind.II:
        if is_active(Mutation.DROP_MEDIATOR_UPDATE):
            mediator = Process.par(AgentRef(a), AgentRef(c), gamma)
        else:
            mediator = Process.par(AgentRef(c), gamma)
        return {a: Process.par(p, q), c: Process.par(AgentRef(a), r, s), e: mediator}

    if label.kind is ActionKind.III:
        return {a: Process.par(p, q), c: Process.par(r, s),
                e: Process.par(AgentRef(c), AgentRef(a), gamma)}

    if is_active(Mutation.KEEP_MERGED_IN_MEDIATOR):
        mediator = Process.par(AgentRef(a), AgentRef(c), gamma)
    else:
        mediator = Process.par(AgentRef(a), gamma)
    return {a: Process.par(p, q, r, s), c: ZERO, e: mediator}


def fire(state: State, label: ActionLabel) -> StepResult:
    """Apply the canonically least redex and report every distinct outcome"""
    redexes = find_redexes(state, label)
    if not redexes:
        raise NotExecutable(label.text)
    outcomes: List[State] = []
    for redex in redexes:
        outcome = state.updated(post_assignments(label, redex))
        if outcome not in outcomes:
            outcomes.append(outcome)
    return StepResult(outcomes[0], redexes[0], tuple(outcomes))


def apply(state: State, label: ActionLabel) -> State:
    redexes = find_redexes(state, label)
    if not redexes:
        raise NotExecutable(label.text)
    return state.updated(post_assignments(label, redexes[0]))


def executable(state: State, label: ActionLabel) -> bool:
    return bool(find_redexes(state, label))


def _partners(state: State, agent: str, kind: ActionKind) -> Iterator[Tuple[str, Optional[str]]]:
    """Candidate (C, E) pairs for an action initiated by agent; E comes from the forest"""
    if kind is ActionKind.I:
        for other in state.agents:
            if other != agent:
                yield other, None
    elif kind in (ActionKind.II, ActionKind.IV):
        for mediator in state.one_step_parents[agent]:
            for sibling in state[mediator].agents:
                if sibling not in (agent, mediator):
                    yield sibling, mediator
    else:
        for host in state.one_step_parents[agent]:
            for mediator in state.one_step_parents[host]:
                if mediator not in (agent, host):
                    yield host, mediator


def enabled_actions(state: State) -> List[ActionLabel]:
    """Every executable label, ordered by type then serialized text"""
    labels = set()
    for agent in state.agents:
        for component in state[agent].sums:
            for alt in component.alternatives:
                if alt.capability.kind not in DUALS:
                    continue
                dual_kind, kind = DUALS[alt.capability.kind]
                dual = Capability(dual_kind, alt.capability.payload)
                for partner, mediator in _partners(state, agent, kind):
                    try:
                        label = ActionLabel(alt.capability, agent, dual, partner, mediator)
                    except MalformedTerm:
                        continue
                    if executable(state, label):
                        labels.add(label)
    return sorted(labels, key=ActionLabel.sort_key)


def participates(agent: str, state: State, label: ActionLabel) -> bool:
    """B :_s alpha: alpha executable and an executor is <=+ B"""
    if not executable(state, label):
        return False
    return (subagent_refl(label.executor_a, agent, state)
            or subagent_refl(label.executor_c, agent, state))
