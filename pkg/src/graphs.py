"""
DOT export of agent forests and of the reachable transition graph
"""

from pathlib import Path
from typing import Dict, List

import networkx as nx
from networkx.drawing.nx_pydot import to_pydot

from src.histories import HistoryUniverse
from src.state_model import State, forest_of


def forest_graph(state: State) -> nx.DiGraph:
    """Node per agent, edge child -> one-step superagent"""
    graph = nx.DiGraph()
    for agent, process in state.assignment:
        graph.add_node(agent, label=agent, tooltip=process.text)
    forest = forest_of(state)
    for child in sorted(forest.parent):
        graph.add_edge(child, forest.parent[child], label="<")
    return graph


def forest_dot(state: State) -> str:
    return to_pydot(forest_graph(state)).to_string()


def state_ids(universe: HistoryUniverse) -> Dict[State, str]:
    return {state: f"state_{n}" for n, state in enumerate(universe.reachable_states())}


def transition_graph(universe: HistoryUniverse) -> nx.MultiDiGraph:
    """Node per distinct reachable state, edge per universe transition"""
    ids = state_ids(universe)
    graph = nx.MultiDiGraph()
    for state, node in ids.items():
        graph.add_node(node, label=node, tooltip=str(state))
    seen = set()
    for source, label, target in universe.edges():
        before = ids[universe.histories[source].last]
        after = ids[universe.histories[target].last]
        if (before, label, after) in seen:
            continue
        seen.add((before, label, after))
        graph.add_edge(before, after, label=label.text)
    return graph


def transition_dot(universe: HistoryUniverse) -> str:
    return to_pydot(transition_graph(universe)).to_string()


def write_dot_files(universe: HistoryUniverse, directory: str) -> List[str]:
    """state_<n>.dot per reachable state plus transitions.dot; returns the written paths"""
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for state, node in state_ids(universe).items():
        path = target / f"{node}.dot"
        path.write_text(forest_dot(state))
        written.append(str(path))
    path = target / "transitions.dot"
    path.write_text(transition_dot(universe))
    written.append(str(path))
    return written
