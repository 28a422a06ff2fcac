"""
Model, Process, Formula and Action Parser
Lark LALR grammar for model files plus canonical serialization
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from lark import Lark, Token, Transformer, Tree, v_args
from lark.exceptions import LarkError, UnexpectedCharacters, UnexpectedInput, UnexpectedToken, VisitError

from src.error_handler import (
    DuplicateAssignment, DuplicateDeclaration, PadelError, PadelSyntaxError,
    StateError, StateInvalidity, UndeclaredAgent,
)
from src.state_model import State, validate_state
from src.syntax import (
    ActionLabel, Bottom, Box, Capability, CapKind, Choice, Diamond, DistKnows,
    Formula, Iff, Implies, Knows, And, Not, Or, Par, Process, RawPrefix,
    Subagent, SubagentPlus, Top, desugar, normalize, render_formula,
)

GRAMMAR = r'''
start: agents_decl init_block+ formula_block*

agents_decl: "agents" idlist ";"
idlist: ID ("," ID)*
init_block: "init" ID "{" assignment+ "}"
assignment: ID "=" process ";"
formula_block: "formula" ID "=" formula ";"

process: term ("|" term)*
term: "0"                    -> zero
    | ID                     -> agent_ref
    | "(" process ")"        -> group
    | prefix ("+" prefix)*   -> choice
prefix: cap "." cont
cont: "0"                    -> cont_zero
    | ID                     -> cont_ref
    | "(" process ")"        -> cont_group
    | prefix                 -> single

cap: "recv" "(" formula ")"  -> recv
   | "send" "(" formula ")"  -> send
   | "enter"                 -> enter
   | "accept"                -> accept
   | "exit"                  -> exit
   | "expel"                 -> expel
   | MERGE_PLUS              -> merge_plus
   | MERGE_MINUS             -> merge_minus

action: "(" cap "@" ID "," cap "@" ID ("," ID)? ")"

?formula: implication
    | implication "<=>" implication      -> iff
?implication: disjunction
    | disjunction "=>" implication       -> implies
?disjunction: conjunction
    | disjunction "or" conjunction       -> lor
?conjunction: unary
    | conjunction "&" unary              -> land
?unary: atom
    | "~" unary                          -> neg
    | KNOWS ID "]" unary                 -> knows
    | DKNOWS idlist "]" unary            -> dknows
    | "[" action "]" unary               -> box
    | "<" action ">" unary               -> diamond
?atom: ID "<+" ID                        -> subplus
    | ID "<" ID                          -> sub
    | "true"                             -> top
    | "false"                            -> bottom
    | "(" formula ")"

MERGE_PLUS.2: "merge+"
MERGE_MINUS.2: "merge-"
KNOWS.2: "K["
DKNOWS.2: "DK["
ID: /[A-Za-z_][A-Za-z0-9_]*/
COMMENT: /#[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
'''

_PARSER = Lark(GRAMMAR, parser="lalr", start=["start", "process", "formula", "action"],
               propagate_positions=True)


@dataclass(frozen=True)
class ModelFile:
    """Agent declarations, named initial states and optional named formulas"""
    agents: Tuple[str, ...]
    initial_states: Tuple[Tuple[str, State], ...]
    named_formulas: Tuple[Tuple[str, Formula], ...] = ()

    def state(self, name: str) -> State:
        for state_name, state in self.initial_states:
            if state_name == name:
                return state
        raise KeyError(name)

    @property
    def state_names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.initial_states)

    @property
    def formulas(self) -> Dict[str, Formula]:
        return dict(self.named_formulas)


@v_args(inline=True)
class _TermBuilder(Transformer):
    """Builds raw process terms, core formulas and action labels"""

    def __init__(self, agents: Optional[Sequence[str]] = None):
        super().__init__()
        self.agents = list(agents) if agents is not None else None

    def _agent(self, token: Token) -> str:
        name = str(token)
        if self.agents is not None and name not in self.agents:
            raise UndeclaredAgent(name, f"line {token.line}")
        return name

    def _core(self, surface: Formula) -> Formula:
        return desugar(surface, self.agents) if self.agents is not None else surface

    # processes

    def process(self, *terms):
        return Par(tuple(terms))

    def zero(self):
        return Par(())

    def agent_ref(self, token):
        return self._agent(token)

    def group(self, inner):
        return inner

    def choice(self, *prefixes):
        return Choice(tuple(prefixes))

    def single(self, prefix):
        return prefix

    cont_zero = zero
    cont_ref = agent_ref
    cont_group = group

    def prefix(self, capability, continuation):
        return RawPrefix(capability, continuation)

    # capabilities

    def recv(self, payload):
        return Capability(CapKind.RECV, self._core(payload))

    def send(self, payload):
        return Capability(CapKind.SEND, self._core(payload))

    def enter(self):
        return Capability(CapKind.ENTER)

    def accept(self):
        return Capability(CapKind.ACCEPT)

    def exit(self):
        return Capability(CapKind.EXIT)

    def expel(self):
        return Capability(CapKind.EXPEL)

    def merge_plus(self, _token):
        return Capability(CapKind.MERGE_PLUS)

    def merge_minus(self, _token):
        return Capability(CapKind.MERGE_MINUS)

    def action(self, cap_a, agent_a, cap_c, agent_c, mediator=None):
        return ActionLabel(cap_a, self._agent(agent_a), cap_c, self._agent(agent_c),
                           self._agent(mediator) if mediator is not None else None)

    # formulas (surface form; desugared by the caller)

    def idlist(self, *tokens):
        return [self._agent(t) for t in tokens]

    def iff(self, left, right):
        return Iff(left, right)

    def implies(self, left, right):
        return Implies(left, right)

    def lor(self, left, right):
        return Or(left, right)

    def land(self, left, right):
        return And(left, right)

    def neg(self, body):
        return Not(body)

    def knows(self, _token, agent, body):
        return Knows(self._agent(agent), body)

    def dknows(self, _token, group, body):
        return DistKnows(tuple(group), body)

    def box(self, label, body):
        return Box(label, body)

    def diamond(self, label, body):
        return Diamond(label, body)

    def subplus(self, lhs, rhs):
        return SubagentPlus(self._agent(lhs), self._agent(rhs))

    def sub(self, lhs, rhs):
        return Subagent(self._agent(lhs), self._agent(rhs))

    def top(self):
        return Top()

    def bottom(self):
        return Bottom()


def _parse_tree(text: str, start: str) -> Tree:
    try:
        return _PARSER.parse(text, start=start)
    except UnexpectedInput as e:
        expected: Sequence[str] = ()
        if isinstance(e, UnexpectedToken):
            expected = e.expected
        elif isinstance(e, UnexpectedCharacters):
            expected = e.allowed or ()
        line = getattr(e, "line", None)
        column = getattr(e, "column", None)
        raise PadelSyntaxError(f"Unexpected input at line {line}, column {column}",
                               line=line, column=column, expected=expected) from None
    except LarkError as e:
        raise PadelSyntaxError(str(e)) from None


def _transform(tree: Tree, builder: Transformer):
    try:
        return builder.transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, PadelError):
            raise e.orig_exc from None
        raise


def parse_model(text: str) -> ModelFile:
    """Parse and validate a model file"""
    tree = _parse_tree(text, "start")
    agents_node = tree.children[0]
    declared: List[str] = []
    for token in agents_node.children[0].children:
        name = str(token)
        if name in declared:
            raise DuplicateDeclaration(name, "agent")
        declared.append(name)

    builder = _TermBuilder(declared)
    states: List[Tuple[str, State]] = []
    formulas: List[Tuple[str, Formula]] = []

    for block in tree.children[1:]:
        if block.data == "init_block":
            name_token, *assignments = block.children
            state_name = str(name_token)
            if state_name in dict(states):
                raise DuplicateDeclaration(state_name, "state")
            mapping: Dict[str, Process] = {}
            for assignment in assignments:
                agent_token, process_tree = assignment.children
                agent = builder._agent(agent_token)
                if agent in mapping:
                    raise DuplicateAssignment(agent, state_name)
                mapping[agent] = normalize(_transform(process_tree, builder))
            try:
                states.append((state_name, validate_state(mapping, declared)))
            except StateError as cause:
                raise StateInvalidity(state_name, cause) from None
        elif block.data == "formula_block":
            name_token, formula_tree = block.children
            name = str(name_token)
            if name in dict(formulas):
                raise DuplicateDeclaration(name, "formula")
            formulas.append((name, desugar(_transform(formula_tree, builder), declared)))

    return ModelFile(tuple(declared), tuple(states), tuple(formulas))


def parse_formula(text: str, agents: Sequence[str]) -> Formula:
    """Parse a formula and desugar it over the agent set"""
    builder = _TermBuilder(agents)
    return desugar(_transform(_parse_tree(text, "formula"), builder), agents)


def parse_process(text: str, agents: Optional[Sequence[str]] = None) -> Process:
    return normalize(_transform(_parse_tree(text, "process"), _TermBuilder(agents)))


def parse_action(text: str, agents: Optional[Sequence[str]] = None) -> ActionLabel:
    return _transform(_parse_tree(text, "action"), _TermBuilder(agents))


def serialize(value: Union[ModelFile, Process, Formula, ActionLabel, State]) -> str:
    """Canonical text; parsing it back yields an equal value"""
    if isinstance(value, ModelFile):
        lines = [f"agents {', '.join(value.agents)};"]
        for name, state in value.initial_states:
            body = " ".join(f"{agent} = {state[agent].text};" for agent in value.agents)
            lines.append(f"init {name} {{ {body} }}")
        for name, formula in value.named_formulas:
            lines.append(f"formula {name} = {render_formula(formula)};")
        return "\n".join(lines) + "\n"
    if isinstance(value, State):
        return "{ " + " ".join(f"{agent} = {process.text};" for agent, process in value.assignment) + " }"
    if isinstance(value, Process):
        return value.text
    if isinstance(value, ActionLabel):
        return value.text
    if isinstance(value, Formula):
        return render_formula(value)
    raise TypeError(f"Cannot serialize {value!r}")
