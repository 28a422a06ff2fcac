"""
State Model
Validated states, subagent relations, the agent forest and state
indistinguishability
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from src.error_handler import PartialAssignment, SelfOccurrence, SharedOccurrence, UndeclaredAgent
from src.mutations import Mutation, is_active
from src.syntax import Process, is_top_level_agent, occurrences


@dataclass(frozen=True)
class State:
    """Total assignment of processes to agents, ordered by agent name"""
    assignment: Tuple[Tuple[str, Process], ...]

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Process]) -> "State":
        """Build without validation; use validate_state for untrusted input"""
        return cls(tuple(sorted(mapping.items())))

    @cached_property
    def _lookup(self) -> Dict[str, Process]:
        return dict(self.assignment)

    def __getitem__(self, agent: str) -> Process:
        return self._lookup[agent]

    @property
    def agents(self) -> Tuple[str, ...]:
        return tuple(agent for agent, _ in self.assignment)

    def as_dict(self) -> Dict[str, Process]:
        return dict(self._lookup)

    def updated(self, changes: Mapping[str, Process]) -> "State":
        merged = dict(self._lookup)
        merged.update(changes)
        return State.from_mapping(merged)

    @cached_property
    def one_step_parents(self) -> Dict[str, Tuple[str, ...]]:
        """A -> every B with A a top-level component of s(B)"""
        parents: Dict[str, List[str]] = {agent: [] for agent in self.agents}
        for owner, process in self.assignment:
            for child in process.agents:
                if child in parents and owner not in parents[child]:
                    parents[child].append(owner)
        return {agent: tuple(sorted(owners)) for agent, owners in parents.items()}

    @cached_property
    def superagents(self) -> Dict[str, FrozenSet[str]]:
        """A -> all B with A <+ B (transitive closure of the one-step relation)"""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.agents)
        for child, owners in self.one_step_parents.items():
            for owner in owners:
                graph.add_edge(child, owner)
        return {agent: frozenset(nx.descendants(graph, agent)) for agent in self.agents}

    def __str__(self):
        return "{ " + "; ".join(f"{a} = {p.text}" for a, p in self.assignment) + " }"


@dataclass(frozen=True)
class AgentForest:
    parent: Dict[str, str]
    roots: FrozenSet[str]

    def children(self, agent: str) -> List[str]:
        return sorted(child for child, owner in self.parent.items() if owner == agent)


def validate_state(assignment: Mapping[str, Process], agents: Sequence[str]) -> State:
    """
    Check the state constraint and return the validated State

    Args:
        assignment: Agent -> process
        agents: The model's declared agent set

    Returns:
        Validated State
    """
    known = set(agents)
    for name in assignment:
        if name not in known:
            raise UndeclaredAgent(name, "state")
    missing = [agent for agent in agents if agent not in assignment]
    if missing:
        raise PartialAssignment(missing)

    # uniqueness: every agent occurs in at most one process, at most once
    owner_of: Dict[str, str] = {}
    graph = nx.DiGraph()
    graph.add_nodes_from(agents)
    for owner in sorted(assignment):
        for occupant in occurrences(assignment[owner]):
            if occupant not in known:
                raise UndeclaredAgent(occupant, f"process of {owner}")
            if occupant in owner_of:
                raise SharedOccurrence(occupant, *sorted((owner_of[occupant], owner)))
            owner_of[occupant] = owner
            graph.add_edge(owner, occupant)

    # acyclicity: no agent occurs transitively in its own process
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        nodes = [edge[0] for edge in cycle]
        start = nodes.index(min(nodes))
        chain = nodes[start:] + nodes[:start]
        raise SelfOccurrence(chain[0], chain + [chain[0]])

    return State.from_mapping(assignment)


def occurs_trans(agent: str, process: Process, state: State) -> bool:
    """A occurs in P directly or through the processes of agents occurring in P"""
    seen = set()
    frontier = [process]
    while frontier:
        current = frontier.pop()
        for occupant in occurrences(current):
            if occupant == agent:
                return True
            if occupant not in seen and occupant in state.agents:
                seen.add(occupant)
                frontier.append(state[occupant])
    return False


def subagent_one_step(a: str, b: str, state: State) -> bool:
    return is_top_level_agent(a, state[b])


def subagent_iter(a: str, b: str, state: State) -> bool:
    return b in state.superagents[a]


def subagent_refl(a: str, b: str, state: State) -> bool:
    if a == b and not is_active(Mutation.IRREFLEXIVE_SUBAGENT):
        return True
    return subagent_iter(a, b, state)


def subtree(observer: str, state: State) -> List[str]:
    """Every X with X <=+ observer in the state"""
    return [agent for agent in state.agents if subagent_refl(agent, observer, state)]


def forest_of(state: State) -> AgentForest:
    parent: Dict[str, str] = {}
    for agent, owners in state.one_step_parents.items():
        if owners:
            parent[agent] = owners[0]
    roots = frozenset(agent for agent in state.agents if agent not in parent)
    return AgentForest(parent, roots)


def state_equiv(observer: str, s: State, t: State) -> bool:
    """s ~_A t: every X <=+ A in s has the same process in both states"""
    return all(s[agent] == t[agent] for agent in subtree(observer, s))


def state_equiv_group(observers: Iterable[str], s: State, t: State) -> bool:
    return all(state_equiv(observer, s, t) for observer in observers)


def render_forest(state: State) -> List[str]:
    """Indented text tree, one line per agent"""
    forest = forest_of(state)
    lines: List[str] = []

    def walk(agent: str, prefix: str, is_last: Optional[bool]):
        if is_last is None:
            connector = ""
        else:
            connector = "└── " if is_last else "├── "
        lines.append(f"{prefix}{connector}{agent} = {state[agent].text}")
        children = forest.children(agent)
        extension = "" if is_last is None else ("    " if is_last else "│   ")
        for i, child in enumerate(children):
            walk(child, prefix + extension, i == len(children) - 1)

    for root in sorted(forest.roots):
        walk(root, "", None)
    return lines
