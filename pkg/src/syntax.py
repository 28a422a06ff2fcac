"""
Core Syntax
Capabilities, processes, action labels and formulas. Processes are kept in
canonical multiset form, so structural congruence is plain equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from src.error_handler import MalformedTerm, UndeclaredAgent


class CapKind(Enum):
    """Capability prefixes"""
    RECV = "recv"
    SEND = "send"
    ENTER = "enter"
    ACCEPT = "accept"
    EXIT = "exit"
    EXPEL = "expel"
    MERGE_PLUS = "merge+"
    MERGE_MINUS = "merge-"

    @property
    def has_payload(self) -> bool:
        return self in (CapKind.RECV, CapKind.SEND)


class ActionKind(Enum):
    """Transition rule types"""
    I = "I"        # communication
    II = "II"      # enter / accept
    III = "III"    # exit / expel
    IV = "IV"      # merge+ / merge-

    @property
    def rank(self) -> int:
        return list(ActionKind).index(self)

    @property
    def mediated(self) -> bool:
        return self is not ActionKind.I


# Active capability -> (dual capability, rule type)
DUALS = {
    CapKind.RECV: (CapKind.SEND, ActionKind.I),
    CapKind.ENTER: (CapKind.ACCEPT, ActionKind.II),
    CapKind.EXIT: (CapKind.EXPEL, ActionKind.III),
    CapKind.MERGE_PLUS: (CapKind.MERGE_MINUS, ActionKind.IV),
}


# ---------- Capabilities and processes ----------

@dataclass(frozen=True)
class Capability:
    kind: CapKind
    payload: Optional["Formula"] = None

    def __post_init__(self):
        if self.kind.has_payload and self.payload is None:
            raise MalformedTerm(f"Capability {self.kind.value} needs a formula payload")
        if not self.kind.has_payload and self.payload is not None:
            raise MalformedTerm(f"Capability {self.kind.value} takes no payload")

    @cached_property
    def text(self) -> str:
        if self.payload is None:
            return self.kind.value
        return f"{self.kind.value}({render_formula(self.payload)})"

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class AgentRef:
    name: str

    @property
    def text(self) -> str:
        return self.name

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Prefixed:
    """a.P"""
    capability: Capability
    continuation: "Process"

    @cached_property
    def text(self) -> str:
        return f"{self.capability.text}.{_continuation_text(self.continuation)}"

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class Sum:
    """Nonempty multiset of prefixed alternatives"""
    alternatives: Tuple[Prefixed, ...]

    def __post_init__(self):
        if not self.alternatives:
            raise MalformedTerm("A sum needs at least one alternative")
        ordered = tuple(sorted(self.alternatives, key=lambda alt: alt.text))
        object.__setattr__(self, "alternatives", ordered)

    @cached_property
    def text(self) -> str:
        return " + ".join(alt.text for alt in self.alternatives)

    def offering(self, capability: Capability) -> Tuple[Prefixed, ...]:
        """Alternatives guarded by exactly this capability"""
        return tuple(alt for alt in self.alternatives if alt.capability == capability)

    def __str__(self):
        return self.text


Component = Union[AgentRef, Sum]


def _component_key(component: Component) -> Tuple[int, str]:
    # agent refs first, then sums, each by serialized text
    if isinstance(component, AgentRef):
        return (0, component.name)
    return (1, component.text)


@dataclass(frozen=True)
class Process:
    """Flattened parallel composition; the empty multiset is 0"""
    components: Tuple[Component, ...] = ()

    def __post_init__(self):
        for component in self.components:
            if not isinstance(component, (AgentRef, Sum)):
                raise MalformedTerm(f"Not a process component: {component!r}")
        object.__setattr__(self, "components", tuple(sorted(self.components, key=_component_key)))

    @classmethod
    def par(cls, *parts: Union["Process", Component]) -> "Process":
        """Parallel composition of processes and components"""
        flat: List[Component] = []
        for part in parts:
            if isinstance(part, Process):
                flat.extend(part.components)
            else:
                flat.append(part)
        return cls(tuple(flat))

    @property
    def is_zero(self) -> bool:
        return not self.components

    @property
    def agents(self) -> Tuple[str, ...]:
        """Top-level agent references"""
        return tuple(c.name for c in self.components if isinstance(c, AgentRef))

    @property
    def sums(self) -> Tuple[Sum, ...]:
        return tuple(c for c in self.components if isinstance(c, Sum))

    def without(self, component: Component) -> "Process":
        """Remove one occurrence of a component"""
        items = list(self.components)
        items.remove(component)
        return Process(tuple(items))

    @cached_property
    def text(self) -> str:
        if not self.components:
            return "0"
        return " | ".join(c.text for c in self.components)

    def __str__(self):
        return self.text


ZERO = Process()


def _continuation_text(process: Process) -> str:
    if process.is_zero:
        return "0"
    if len(process.components) == 1:
        only = process.components[0]
        if isinstance(only, AgentRef):
            return only.name
        if len(only.alternatives) == 1:
            return only.alternatives[0].text
    return f"({process.text})"


# ---------- Raw parse trees ----------

@dataclass(frozen=True)
class Par:
    """Unflattened parallel composition; Par(()) is 0"""
    parts: Tuple["RawProcess", ...] = ()


@dataclass(frozen=True)
class RawPrefix:
    capability: Capability
    continuation: "RawProcess"


@dataclass(frozen=True)
class Choice:
    alternatives: Tuple[RawPrefix, ...]


RawProcess = Union[Par, Choice, RawPrefix, str, AgentRef, Sum, Prefixed, Process]


def normalize(raw: RawProcess) -> Process:
    """Canonical flattened multiset form of a process term"""
    if isinstance(raw, Process):
        return Process.par(*(normalize(c) for c in raw.components))
    if isinstance(raw, str):
        return Process((AgentRef(raw),))
    if isinstance(raw, AgentRef):
        return Process((raw,))
    if isinstance(raw, Par):
        return Process.par(*(normalize(part) for part in raw.parts))
    if isinstance(raw, (Choice, Sum)):
        return Process((Sum(tuple(_normalize_prefix(alt) for alt in raw.alternatives)),))
    if isinstance(raw, (RawPrefix, Prefixed)):
        return Process((Sum((_normalize_prefix(raw),)),))
    raise TypeError(f"Cannot normalize {raw!r}")


def _normalize_prefix(raw: Union[RawPrefix, Prefixed]) -> Prefixed:
    return Prefixed(raw.capability, normalize(raw.continuation))


def occurs(agent: str, process: Process) -> bool:
    """A occurs in P: as a parallel component or under any prefix"""
    for component in process.components:
        if isinstance(component, AgentRef):
            if component.name == agent:
                return True
        elif any(occurs(agent, alt.continuation) for alt in component.alternatives):
            return True
    return False


def occurrences(process: Process) -> List[str]:
    """Every agent occurring in P, with multiplicity"""
    found: List[str] = []
    for component in process.components:
        if isinstance(component, AgentRef):
            found.append(component.name)
        else:
            for alt in component.alternatives:
                found.extend(occurrences(alt.continuation))
    return found


def is_top_level_agent(agent: str, process: Process) -> bool:
    return AgentRef(agent) in process.components


# ---------- Action labels ----------

@dataclass(frozen=True)
class ActionLabel:
    """A dual capability pair with its executors and, for Types II-IV, the mediator E"""
    cap_a: Capability
    executor_a: str
    cap_c: Capability
    executor_c: str
    mediator: Optional[str] = None

    def __post_init__(self):
        if self.cap_a.kind not in DUALS:
            raise MalformedTerm(
                f"Action must start with recv, enter, exit or merge+, got {self.cap_a.kind.value}")
        dual, kind = DUALS[self.cap_a.kind]
        if self.cap_c.kind != dual:
            raise MalformedTerm(f"{self.cap_a.kind.value} pairs with {dual.value}, "
                                f"got {self.cap_c.kind.value}")
        if kind is ActionKind.I and self.cap_a.payload != self.cap_c.payload:
            raise MalformedTerm("recv and send must carry the same formula")
        if self.executor_a == self.executor_c:
            raise MalformedTerm(f"Executing agents must be distinct, got {self.executor_a} twice")
        if kind.mediated and self.mediator is None:
            raise MalformedTerm(f"Type {kind.value} actions need a mediating agent")
        if not kind.mediated and self.mediator is not None:
            raise MalformedTerm("Communication actions take no mediating agent")
        if self.mediator in (self.executor_a, self.executor_c):
            raise MalformedTerm(f"Mediator {self.mediator} must differ from the executors")

    @property
    def kind(self) -> ActionKind:
        return DUALS[self.cap_a.kind][1]

    @property
    def agents(self) -> Tuple[str, ...]:
        named = (self.executor_a, self.executor_c)
        return named + ((self.mediator,) if self.mediator else ())

    @cached_property
    def text(self) -> str:
        body = f"{self.cap_a.text}@{self.executor_a}, {self.cap_c.text}@{self.executor_c}"
        if self.mediator:
            body += f", {self.mediator}"
        return f"({body})"

    def sort_key(self) -> Tuple[int, str]:
        return (self.kind.rank, self.text)

    def __str__(self):
        return self.text


def action(cap_a: Union[CapKind, Capability], executor_a: str,
           cap_c: Union[CapKind, Capability], executor_c: str,
           mediator: Optional[str] = None) -> ActionLabel:
    """Shorthand: action(CapKind.ENTER, "A", CapKind.ACCEPT, "C", "E")"""
    first = cap_a if isinstance(cap_a, Capability) else Capability(cap_a)
    second = cap_c if isinstance(cap_c, Capability) else Capability(cap_c)
    return ActionLabel(first, executor_a, second, executor_c, mediator)


# ---------- Formulas ----------

@dataclass(frozen=True)
class Formula:
    # ~phi, phi & psi, phi | psi, phi >> psi build core formulas directly
    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return disjunction(self, other)

    def __rshift__(self, other):
        return implication(self, other)

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class SubagentPlus(Formula):
    lhs: str
    rhs: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Knows(Formula):
    agent: str
    body: Formula


@dataclass(frozen=True)
class DistKnows(Formula):
    agents: Tuple[str, ...]
    body: Formula

    def __post_init__(self):
        group = tuple(sorted(set(self.agents)))
        if not group:
            raise MalformedTerm("Distributed knowledge needs a nonempty group")
        object.__setattr__(self, "agents", group)


@dataclass(frozen=True)
class Box(Formula):
    action: ActionLabel
    body: Formula


# Surface connectives; desugar() removes them

@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    action: ActionLabel
    body: Formula


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Subagent(Formula):
    """One-step A<C"""
    lhs: str
    rhs: str


CORE_TYPES = (SubagentPlus, Not, And, Knows, DistKnows, Box)


def disjunction(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def implication(left: Formula, right: Formula) -> Formula:
    # material implication, not the literal ~(phi or psi)
    return disjunction(Not(left), right)


def equivalence(left: Formula, right: Formula) -> Formula:
    return And(implication(left, right), implication(right, left))


def diamond(label: ActionLabel, body: Formula) -> Formula:
    return Not(Box(label, Not(body)))


def fixed_atom(agents: Sequence[str]) -> SubagentPlus:
    """The lexicographically least A<+B atom over the agent set"""
    if not agents:
        raise MalformedTerm("Truth constants need a nonempty agent set")
    least = min(agents)
    return SubagentPlus(least, least)


def top(agents: Sequence[str]) -> Formula:
    p = fixed_atom(agents)
    return disjunction(p, Not(p))


def bottom(agents: Sequence[str]) -> Formula:
    p = fixed_atom(agents)
    return And(p, Not(p))


def conjunction(parts: Iterable[Formula], agents: Sequence[str]) -> Formula:
    """Left fold of And; the empty conjunction is true"""
    result: Optional[Formula] = None
    for part in parts:
        result = part if result is None else And(result, part)
    return result if result is not None else top(agents)


def one_step(lhs: str, rhs: str, agents: Sequence[str]) -> Formula:
    """A<C := A<+C and no B strictly between them"""
    result: Formula = SubagentPlus(lhs, rhs)
    for between in sorted(agents):
        if between in (lhs, rhs):
            continue
        result = And(result, Not(And(SubagentPlus(lhs, between), SubagentPlus(between, rhs))))
    return result


def desugar(formula: Formula, agents: Sequence[str]) -> Formula:
    """Rewrite surface connectives into the core grammar over a fixed agent set"""
    known = frozenset(agents)

    def check(*names: Optional[str]):
        for name in names:
            if name is not None and name not in known:
                raise UndeclaredAgent(name, "formula")

    def go(f: Formula) -> Formula:
        if isinstance(f, SubagentPlus):
            check(f.lhs, f.rhs)
            return f
        if isinstance(f, Not):
            return Not(go(f.body))
        if isinstance(f, And):
            return And(go(f.left), go(f.right))
        if isinstance(f, Knows):
            check(f.agent)
            return Knows(f.agent, go(f.body))
        if isinstance(f, DistKnows):
            check(*f.agents)
            return DistKnows(f.agents, go(f.body))
        if isinstance(f, Box):
            check(*f.action.agents)
            return Box(f.action, go(f.body))
        if isinstance(f, Or):
            return disjunction(go(f.left), go(f.right))
        if isinstance(f, Implies):
            return implication(go(f.left), go(f.right))
        if isinstance(f, Iff):
            return equivalence(go(f.left), go(f.right))
        if isinstance(f, Diamond):
            check(*f.action.agents)
            return diamond(f.action, go(f.body))
        if isinstance(f, Top):
            return top(agents)
        if isinstance(f, Bottom):
            return bottom(agents)
        if isinstance(f, Subagent):
            check(f.lhs, f.rhs)
            return one_step(f.lhs, f.rhs, agents)
        raise TypeError(f"Not a formula: {f!r}")

    return go(formula)


def is_core(formula: Formula) -> bool:
    if not isinstance(formula, CORE_TYPES):
        return False
    if isinstance(formula, SubagentPlus):
        return True
    if isinstance(formula, And):
        return is_core(formula.left) and is_core(formula.right)
    return is_core(formula.body)


def box_depth(formula: Formula) -> int:
    """Nesting depth of dynamic modalities"""
    if isinstance(formula, SubagentPlus):
        return 0
    if isinstance(formula, And):
        return max(box_depth(formula.left), box_depth(formula.right))
    if isinstance(formula, Box):
        return 1 + box_depth(formula.body)
    if isinstance(formula, (Not, Knows, DistKnows)):
        return box_depth(formula.body)
    raise TypeError(f"box_depth expects a core formula, got {formula!r}")


def render_formula(formula: Formula) -> str:
    if isinstance(formula, SubagentPlus):
        return f"{formula.lhs} <+ {formula.rhs}"
    if isinstance(formula, Not):
        return "~" + _operand(formula.body)
    if isinstance(formula, And):
        return f"({render_formula(formula.left)} & {render_formula(formula.right)})"
    if isinstance(formula, Knows):
        return f"K[{formula.agent}]{_operand(formula.body)}"
    if isinstance(formula, DistKnows):
        return f"DK[{', '.join(formula.agents)}]{_operand(formula.body)}"
    if isinstance(formula, Box):
        return f"[{formula.action.text}]{_operand(formula.body)}"
    if isinstance(formula, Or):
        return f"({render_formula(formula.left)} or {render_formula(formula.right)})"
    if isinstance(formula, Implies):
        return f"({render_formula(formula.left)} => {render_formula(formula.right)})"
    if isinstance(formula, Iff):
        return f"({render_formula(formula.left)} <=> {render_formula(formula.right)})"
    if isinstance(formula, Diamond):
        return f"<{formula.action.text}>{_operand(formula.body)}"
    if isinstance(formula, Top):
        return "true"
    if isinstance(formula, Bottom):
        return "false"
    if isinstance(formula, Subagent):
        return f"{formula.lhs} < {formula.rhs}"
    raise TypeError(f"Not a formula: {formula!r}")


def _operand(formula: Formula) -> str:
    # atoms are parenthesized under unary operators for readability
    if isinstance(formula, (SubagentPlus, Subagent)):
        return f"({render_formula(formula)})"
    return render_formula(formula)
