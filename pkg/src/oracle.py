"""
Brute-force oracle
Literal re-implementations of the subagent relation, the four rules, the
enabled-action set and history equivalence, written over raw component lists.
Used to cross-check the fast implementations on a whole universe.
"""

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterator, List, Optional, Set, Tuple

from src.error_handler import MalformedTerm
from src.histories import History, HistoryUniverse, history_equiv
from src.state_model import State, subagent_iter, subagent_refl
from src.syntax import ActionLabel, AgentRef, Capability, CapKind, Process, Sum
from src.transitions import enabled_actions

_PARTNER = {
    CapKind.RECV: CapKind.SEND,
    CapKind.ENTER: CapKind.ACCEPT,
    CapKind.EXIT: CapKind.EXPEL,
    CapKind.MERGE_PLUS: CapKind.MERGE_MINUS,
}


@dataclass(frozen=True)
class Discrepancy:
    check: str
    subject: str
    expected: str
    actual: str

    def __str__(self):
        return f"{self.check} on {self.subject}: expected {self.expected}, got {self.actual}"


def chain_search(a: str, b: str, state: State) -> bool:
    """A <+ B: some chain A, X1, ..., B where each is a parallel component of the next"""
    def holders(x: str) -> List[str]:
        return [owner for owner, process in state.assignment
                if any(isinstance(c, AgentRef) and c.name == x for c in process.components)]

    stack, seen = [a], set()
    while stack:
        current = stack.pop()
        for owner in holders(current):
            if owner == b:
                return True
            if owner not in seen:
                seen.add(owner)
                stack.append(owner)
    return False


def chain_search_refl(a: str, b: str, state: State) -> bool:
    return a == b or chain_search(a, b, state)


def _choices(components: List, capability: Capability) -> Iterator[Tuple[List, List]]:
    # (continuation components, remainder components) for every matching alternative
    for i, component in enumerate(components):
        if not isinstance(component, Sum):
            continue
        for alt in component.alternatives:
            if alt.capability == capability:
                yield list(alt.continuation.components), components[:i] + components[i + 1:]


def _without_ref(components: List, name: str) -> Optional[List]:
    for i, component in enumerate(components):
        if isinstance(component, AgentRef) and component.name == name:
            return components[:i] + components[i + 1:]
    return None


def naive_post_states(state: State, label: ActionLabel) -> Set[State]:
    """Every post-state any decomposition of the rule premises allows"""
    a, c, e = label.executor_a, label.executor_c, label.mediator
    if any(agent not in state.agents for agent in label.agents):
        return set()
    results: Set[State] = set()

    def build(changes) -> State:
        merged = state.as_dict()
        merged.update({agent: Process(tuple(parts)) for agent, parts in changes.items()})
        return State.from_mapping(merged)

    a_parts = list(state[a].components)
    c_parts = list(state[c].components)
    e_parts = list(state[e].components) if e else []
    kind = label.cap_a.kind

    if kind is CapKind.RECV:
        for p, q in _choices(a_parts, label.cap_a):
            for r, s in _choices(c_parts, label.cap_c):
                results.add(build({a: p + q, c: r + s}))
    elif kind is CapKind.ENTER or kind is CapKind.MERGE_PLUS:
        gamma = _without_ref(e_parts, a)
        gamma = _without_ref(gamma, c) if gamma is not None else None
        if gamma is None:
            return results
        for p, q in _choices(a_parts, label.cap_a):
            for r, s in _choices(c_parts, label.cap_c):
                if kind is CapKind.ENTER:
                    results.add(build({a: p + q, c: [AgentRef(a)] + r + s, e: [AgentRef(c)] + gamma}))
                else:
                    results.add(build({a: p + q + r + s, c: [], e: [AgentRef(a)] + gamma}))
    elif kind is CapKind.EXIT:
        gamma = _without_ref(e_parts, c)
        host = _without_ref(c_parts, a)
        if gamma is None or host is None:
            return results
        for p, q in _choices(a_parts, label.cap_a):
            for r, s in _choices(host, label.cap_c):
                results.add(build({a: p + q, c: r + s, e: [AgentRef(c), AgentRef(a)] + gamma}))
    return results


def naive_enabled(state: State) -> Set[ActionLabel]:
    """Executable labels among every instantiation over the state's agents"""
    capabilities = {alt.capability
                    for _, process in state.assignment
                    for component in process.sums
                    for alt in component.alternatives
                    if alt.capability.kind in _PARTNER}
    labels: Set[ActionLabel] = set()
    for capability in capabilities:
        dual = Capability(_PARTNER[capability.kind], capability.payload)
        mediated = capability.kind is not CapKind.RECV
        size = 3 if mediated else 2
        for agents in permutations(state.agents, size):
            try:
                label = ActionLabel(capability, agents[0], dual, agents[1],
                                    agents[2] if mediated else None)
            except MalformedTerm:
                continue
            if naive_post_states(state, label):
                labels.add(label)
    return labels


def _naive_participates(observer: str, state: State, label: ActionLabel) -> bool:
    if not naive_post_states(state, label):
        return False
    return (chain_search_refl(label.executor_a, observer, state)
            or chain_search_refl(label.executor_c, observer, state))


def naive_history_equiv(observer: str, h: History, g: History) -> bool:
    """Literal unfolding of history and action equivalence"""
    if len(h.actions) != len(g.actions):
        return False
    for s, t in zip(h.states, g.states):
        for agent in s.agents:
            if chain_search_refl(agent, observer, s) and s[agent] != t[agent]:
                return False
    for i, (alpha, beta) in enumerate(zip(h.actions, g.actions)):
        s = h.states[i]
        seen_alpha = _naive_participates(observer, s, alpha)
        seen_beta = _naive_participates(observer, s, beta)
        if not ((seen_alpha and alpha == beta) or (not seen_alpha and not seen_beta)):
            return False
    return True


@dataclass
class OracleRun:
    """Outcome of a cross-check: how many comparisons were made and which disagreed"""
    queries: int = 0
    discrepancies: List[Discrepancy] = field(default_factory=list)

    def compare(self, check: str, subject: str, slow, fast, render=str):
        self.queries += 1
        if fast != slow:
            self.discrepancies.append(Discrepancy(check, subject, render(slow), render(fast)))


def _labels(labels: Set[ActionLabel]) -> str:
    return ", ".join(sorted(label.text for label in labels))


def cross_check(universe: HistoryUniverse) -> OracleRun:
    """Compare the fast relations, enabled sets, transitions and equivalences with the oracle"""
    run = OracleRun()
    for state in universe.reachable_states():
        subject = str(state)
        for a in state.agents:
            for b in state.agents:
                run.compare("subagent", f"{a} <+ {b} in {subject}",
                            chain_search(a, b, state), subagent_iter(a, b, state))
                run.compare("subagent-refl", f"{a} <=+ {b} in {subject}",
                            chain_search_refl(a, b, state), subagent_refl(a, b, state))
        run.compare("enabled", subject, naive_enabled(state), set(enabled_actions(state)), _labels)

    for source, label, target in universe.edges():
        after = universe.histories[target].last
        allowed = naive_post_states(universe.histories[source].last, label)
        run.queries += 1
        if after not in allowed:
            run.discrepancies.append(Discrepancy(
                "transition", f"{universe.path_of(source)} {label.text}",
                " or ".join(sorted(str(s) for s in allowed)) or "not executable", str(after)))

    for size in range(universe.depth + 1):
        members = universe.slice(size)
        for observer in universe.agents:
            for i in members:
                for j in members:
                    h, g = universe.histories[i], universe.histories[j]
                    run.compare("history-equiv", f"{universe.path_of(i)} ~{observer} {universe.path_of(j)}",
                                naive_history_equiv(observer, h, g), history_equiv(observer, h, g))
    return run


def check_universe(universe: HistoryUniverse) -> List[Discrepancy]:
    return cross_check(universe).discrepancies
