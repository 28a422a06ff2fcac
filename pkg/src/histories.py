"""
Histories
Bounded history universes, action and history indistinguishability, and the
two history propositions (perfect recall, subagent monotonicity)
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.error_handler import (
    BudgetExceeded, ConfigError, ErrorContext, HistoryNotInUniverse,
)
from src.mutations import Mutation, active_mutations, is_active
from src.parser import ModelFile
from src.state_model import State, state_equiv, subagent_iter
from src.syntax import ActionLabel
from src.transitions import apply, enabled_actions, fire, participates

DEFAULT_DEPTH_CAP = 6
DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True)
class History:
    """s0 a0 s1 ... sn; the size is the number of actions"""
    states: Tuple[State, ...]
    actions: Tuple[ActionLabel, ...] = ()

    def __post_init__(self):
        if not self.states:
            raise ValueError("A history needs at least one state")
        if len(self.states) != len(self.actions) + 1:
            raise ValueError("A history alternates states and actions")

    def __len__(self) -> int:
        return len(self.actions)

    @property
    def first(self) -> State:
        return self.states[0]

    @property
    def last(self) -> State:
        return self.states[-1]

    def prefix(self, size: int) -> "History":
        return History(self.states[:size + 1], self.actions[:size])


def extend(history: History, label: ActionLabel) -> History:
    """(h, alpha, apply(last(h), alpha))"""
    successor = apply(history.last, label)
    return History(history.states + (successor,), history.actions + (label,))


@dataclass
class HistoryUniverse:
    """
    Every history of size 0..depth reachable from the model's initial states.

    Histories are stored in breadth-first enumeration order and addressed by
    index; paths such as ``s0/0/1`` name them for the CLI.
    """
    model: ModelFile
    depth: int
    histories: List[History] = field(default_factory=list)
    paths: List[str] = field(default_factory=list)
    parents: List[Optional[int]] = field(default_factory=list)
    children: List[List[Tuple[ActionLabel, int]]] = field(default_factory=list)
    diagnostics: List[ErrorContext] = field(default_factory=list)
    _by_path: Dict[str, int] = field(default_factory=dict, repr=False)
    _by_history: Dict[History, int] = field(default_factory=dict, repr=False)
    _classes: Dict[tuple, Tuple[int, ...]] = field(default_factory=dict, repr=False)
    _slices: Dict[int, List[int]] = field(default_factory=dict, repr=False)

    @property
    def agents(self) -> Tuple[str, ...]:
        return self.model.agents

    def __len__(self) -> int:
        return len(self.histories)

    def _add(self, history: History, path: str, parent: Optional[int]) -> int:
        index = len(self.histories)
        self.histories.append(history)
        self.paths.append(path)
        self.parents.append(parent)
        self.children.append([])
        self._by_path[path] = index
        self._by_history.setdefault(history, index)
        self._slices.setdefault(len(history), []).append(index)
        return index

    def resolve(self, path: str) -> int:
        if path not in self._by_path:
            raise HistoryNotInUniverse(f"No history at path '{path}'", path=path)
        return self._by_path[path]

    def index_of(self, history: History) -> int:
        if history not in self._by_history:
            raise HistoryNotInUniverse("History is not a member of the universe")
        return self._by_history[history]

    def path_of(self, index: int) -> str:
        return self.paths[index]

    def successors(self, index: int, label: ActionLabel) -> List[int]:
        """In-universe h' with h ->alpha h'"""
        return [child for edge, child in self.children[index] if edge == label]

    def slice(self, size: int) -> List[int]:
        return list(self._slices.get(size, ()))

    def counts_per_length(self) -> Dict[int, int]:
        counts = {size: 0 for size in range(self.depth + 1)}
        for history in self.histories:
            counts[len(history)] += 1
        return counts

    def edges(self) -> Iterable[Tuple[int, ActionLabel, int]]:
        for index, outgoing in enumerate(self.children):
            for label, child in outgoing:
                yield index, label, child

    def edge_labels(self) -> List[ActionLabel]:
        """Distinct labels on universe transitions, in label order"""
        return sorted({label for _, label, _ in self.edges()}, key=ActionLabel.sort_key)

    def reachable_states(self) -> List[State]:
        seen: Dict[State, None] = {}
        for history in self.histories:
            for state in history.states:
                seen.setdefault(state)
        return list(seen)

    def group_class(self, observers: Sequence[str], index: int) -> Tuple[int, ...]:
        """Indices of the same-size histories indistinguishable to every observer"""
        group = tuple(sorted(set(observers)))
        key = (group, index, active_mutations())
        if key not in self._classes:
            history = self.histories[index]
            self._classes[key] = tuple(
                j for j in self.slice(len(history))
                if history_equiv_group(group, self.histories[j], history))
        return self._classes[key]

    def equivalence_class(self, observer: str, index: int) -> Tuple[int, ...]:
        return self.group_class((observer,), index)


def _over_budget(budget: int):
    raise BudgetExceeded(f"More than {budget} histories; raise the budget or lower the depth",
                         budget=budget)


def generate_universe(model: ModelFile, depth: int, budget: int = DEFAULT_BUDGET,
                      depth_cap: int = DEFAULT_DEPTH_CAP) -> HistoryUniverse:
    """
    Breadth-first closure of the initial states up to the given size

    Args:
        model: Parsed model file
        depth: Maximum history size
        budget: Maximum number of histories before BudgetExceeded
        depth_cap: Upper bound accepted for depth

    Returns:
        Populated HistoryUniverse
    """
    if depth < 0:
        raise ConfigError(f"Depth must be nonnegative, got {depth}")
    if depth > depth_cap:
        raise ConfigError(f"Depth {depth} exceeds the configured cap {depth_cap}")

    universe = HistoryUniverse(model, depth)
    queue = deque()
    for name, state in model.initial_states:
        queue.append(universe._add(History((state,)), name, None))
        if len(universe) > budget:
            _over_budget(budget)

    while queue:
        index = queue.popleft()
        history = universe.histories[index]
        if len(history) >= depth:
            continue
        for position, label in enumerate(enabled_actions(history.last)):
            step = fire(history.last, label)
            diagnostic = step.diagnostic(label)
            if diagnostic is not None:
                diagnostic.location = universe.paths[index]
                universe.diagnostics.append(diagnostic)
            child = History(history.states + (step.state,), history.actions + (label,))
            child_index = universe._add(child, f"{universe.paths[index]}/{position}", index)
            universe.children[index].append((label, child_index))
            if len(universe) > budget:
                _over_budget(budget)
            queue.append(child_index)
    return universe


def action_equiv(observer: str, state: State, alpha: ActionLabel, beta: ActionLabel) -> bool:
    """alpha ~_A beta at s: both seen and equal, or neither seen"""
    seen_alpha = participates(observer, state, alpha)
    if seen_alpha:
        return alpha == beta
    return not participates(observer, state, beta)


def history_equiv(observer: str, h: History, g: History) -> bool:
    """Same size, pointwise state equivalence and action equivalence at h's states"""
    if len(h) != len(g):
        return False
    if not all(state_equiv(observer, s, t) for s, t in zip(h.states, g.states)):
        return False
    if is_active(Mutation.IGNORE_ACTIONS):
        return True
    return all(action_equiv(observer, h.states[i], h.actions[i], g.actions[i])
               for i in range(len(h)))


def history_equiv_group(observers: Iterable[str], h: History, g: History) -> bool:
    return all(history_equiv(observer, h, g) for observer in observers)


@dataclass(frozen=True)
class PropositionFailure:
    observer: str
    first: int
    second: int
    reason: str
    subagent: Optional[str] = None


def perfect_recall_failures(universe: HistoryUniverse, observers: Optional[Sequence[str]] = None
                            ) -> Tuple[int, List[PropositionFailure]]:
    """
    h' ~_C h'' with h' = (h1, a, s'), h'' = (h2, b, s'') must give h1 ~_C h2 and a ~_C b.
    Returns (pairs checked, failures).
    """
    observers = list(observers or universe.agents)
    checked = 0
    failures: List[PropositionFailure] = []
    for size in range(1, universe.depth + 1):
        for observer in observers:
            for i in universe.slice(size):
                for j in universe.equivalence_class(observer, i):
                    h, g = universe.histories[i], universe.histories[j]
                    checked += 1
                    h1, g1 = h.prefix(size - 1), g.prefix(size - 1)
                    if not history_equiv(observer, h1, g1):
                        failures.append(PropositionFailure(observer, i, j, "prefixes differ"))
                    elif not action_equiv(observer, h1.last, h.actions[-1], g.actions[-1]):
                        failures.append(PropositionFailure(observer, i, j, "last actions differ"))
    return checked, failures


def subagent_mono_failures(universe: HistoryUniverse, observers: Optional[Sequence[str]] = None
                           ) -> Tuple[int, List[PropositionFailure]]:
    """
    h ~_C h' and A <+ C at last(h) must give h ~_A h'.
    Returns (instances checked, failures).
    """
    observers = list(observers or universe.agents)
    checked = 0
    failures: List[PropositionFailure] = []
    for observer in observers:
        for i, h in enumerate(universe.histories):
            below = [a for a in universe.agents if subagent_iter(a, observer, h.last)]
            if not below:
                continue
            for j in universe.equivalence_class(observer, i):
                g = universe.histories[j]
                for agent in below:
                    checked += 1
                    if not history_equiv(agent, h, g):
                        failures.append(PropositionFailure(observer, i, j, "subagent distinguishes",
                                                           subagent=agent))
    return checked, failures


def replay(universe: HistoryUniverse, index: int) -> History:
    """Rebuild a member by re-applying its actions from its initial state"""
    history = universe.histories[index]
    rebuilt = History((history.first,))
    for label in history.actions:
        rebuilt = extend(rebuilt, label)
    return rebuilt


def follow_path(model: ModelFile, path: str) -> History:
    """Walk a path such as s0/0/1 without generating a universe"""
    name, *steps = path.strip().split("/")
    if name not in model.state_names:
        raise HistoryNotInUniverse(f"No initial state named '{name}'", path=path)
    history = History((model.state(name),))
    for step in steps:
        enabled = enabled_actions(history.last)
        if not step.isdigit() or int(step) >= len(enabled):
            raise HistoryNotInUniverse(
                f"Step '{step}' of {path} does not name one of {len(enabled)} enabled actions", path=path)
        history = extend(history, enabled[int(step)])
    return history
