"""
Axiom Suite
Instantiates the axiom schemas, reduction laws, corollaries and history
propositions over a generated universe and reports counterexamples
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, permutations
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from src.error_handler import ConfigError, DepthInsufficient, NotExecutable, StateError
from src.histories import (
    DEFAULT_BUDGET, DEFAULT_DEPTH_CAP, HistoryUniverse, action_equiv, generate_universe,
    perfect_recall_failures, subagent_mono_failures,
)
from src.model_checker import EvalContext, valid_in_universe
from src.mutations import Mutation, mutated
from src.oracle import cross_check
from src.parser import ModelFile
from src.state_model import validate_state
from src.syntax import (
    ActionKind, ActionLabel, And, Box, DistKnows, Formula, Knows, Not, SubagentPlus,
    box_depth, conjunction, diamond, disjunction, equivalence, implication, one_step,
    render_formula, top,
)
from src.transitions import apply

MAX_REPORTED_FAILURES = 25


class SchemaId(Enum):
    """Catalogue entries, in report order"""
    CONS_II_PRE = "Cons-II-pre"
    CONS_III_PRE = "Cons-III-pre"
    CONS_IV_PRE = "Cons-IV-pre"
    CONS_II_POST = "Cons-II-post"
    CONS_III_POST = "Cons-III-post"
    CONS_IV_POST = "Cons-IV-post"
    G1 = "G1"
    KTO_DK = "KtoDK"
    KOWN = "KOwn"
    DKOWN = "DKOwn"
    KFROM_DK = "KfromDK"
    R = "R"
    TRANS = "Trans"
    TREE = "Tree"
    PARTIAL_FUNCTIONALITY = "PartialFunctionality"
    PF1 = "PF1"
    PF2A = "PF2a"
    PF2B = "PF2b"
    PF3A = "PF3a"
    PF3B = "PF3b"
    PF4A = "PF4a"
    PF4B = "PF4b"
    ACKN1A = "AcKn1a"
    ACKN1B = "AcKn1b"
    ACKN2A = "AcKn2a"
    ACKN2B = "AcKn2b"
    ACKN2C = "AcKn2c"
    ACKN3A = "AcKn3a"
    ACKN3B = "AcKn3b"
    ACKN4A = "AcKn4a"
    ACKN4B = "AcKn4b"
    ACKN_NP = "AcKnNP"
    COR1 = "Cor1"
    COR2 = "Cor2"
    COR3 = "Cor3"
    COR4 = "Cor4"
    COR5 = "Cor5"
    COR6 = "Cor6"
    PERFECT_RECALL = "PerfectRecall"
    SUBAGENT_MONO = "SubagentMono"
    KT = "KT"
    K4 = "K4"
    K5 = "K5"
    STATE_VALIDITY = "StateValidity"
    DETERMINISM = "Determinism"
    ORACLE_AGREEMENT = "OracleAgreement"

    @classmethod
    def parse(cls, text: str) -> "SchemaId":
        wanted = text.strip().lower()
        for schema in cls:
            if schema.value.lower() == wanted:
                return schema
        raise ConfigError(f"Unknown schema '{text}'", schema=text)

    @classmethod
    def parse_list(cls, text: str) -> List["SchemaId"]:
        return [cls.parse(part) for part in text.split(",") if part.strip()]


# Entries checked beyond the displayed laws
SUPPLEMENTARY = frozenset({
    SchemaId.KT, SchemaId.K4, SchemaId.K5,
    SchemaId.STATE_VALIDITY, SchemaId.DETERMINISM, SchemaId.ORACLE_AGREEMENT,
})

# Every displayed law and the entry that checks it
DISPLAYED_LAWS: Tuple[Tuple[str, SchemaId], ...] = (
    ("<a_II>T => A<E & C<E", SchemaId.CONS_II_PRE),
    ("<a_III>T => A<C & C<E", SchemaId.CONS_III_PRE),
    ("<a_IV>T => A<E & C<E", SchemaId.CONS_IV_PRE),
    ("[a_II] A<C", SchemaId.CONS_II_POST),
    ("[a_III] A<E", SchemaId.CONS_III_POST),
    ("[a_IV] ~C<E", SchemaId.CONS_IV_POST),
    ("DK_A phi <=> K_A phi", SchemaId.G1),
    ("K_A phi => DK_{A,B1..Bn} phi", SchemaId.KTO_DK),
    ("A<+C => K_C(A<+C)", SchemaId.KOWN),
    ("A<+C & C<+B => DK_{B,A1..An}(A<+C)", SchemaId.DKOWN),
    ("B1..Bn <+ A & DK_{B1..Bn} phi => K_A phi", SchemaId.KFROM_DK),
    ("~A<+A", SchemaId.R),
    ("A<+B & B<+C => A<+C", SchemaId.TRANS),
    ("(X<+A & X<+B) => (A<+B or B<+A)", SchemaId.TREE),
    ("[a]~phi <=> (<a>T => ~[a]phi)", SchemaId.PARTIAL_FUNCTIONALITY),
    ("[a_I]phi <=> (<a_I>T => phi)", SchemaId.PF1),
    ("X!=A: [a_II]X<Y <=> (<a_II>T => X<Y)", SchemaId.PF2A),
    ("Y!=E,C: [a_II]A<Y <=> (<a_II>T => A<Y)", SchemaId.PF2B),
    ("X!=A: [a_III]X<Y <=> (<a_III>T => X<Y)", SchemaId.PF3A),
    ("Y!=E,C: [a_III]A<Y <=> (<a_III>T => A<Y)", SchemaId.PF3B),
    ("X<C => [a_IV]X<A", SchemaId.PF4A),
    ("X!=C: ~X<A => ([a_IV]X<Y <=> (<a_IV>T => X<Y))", SchemaId.PF4B),
    ("X=A,C: [a_I]K_X phi <=> (<a_I>T => K_X[a_I]phi)", SchemaId.ACKN1A),
    ("(A<+X or C<+X) => ([a_I]K_X phi <=> (<a_I>T => K_X[a_I]phi))", SchemaId.ACKN1B),
    ("[a_II]K_C phi <=> (<a_II>T => DK_{A,C}[a_II]phi)", SchemaId.ACKN2A),
    ("C<+X => ([a_II]K_X phi <=> (<a_II>T => K_X[a_II]phi))", SchemaId.ACKN2B),
    ("[a_II]K_A phi <=> (<a_II>T => K_A[a_II]phi)", SchemaId.ACKN2C),
    ("X=A,C: [a_III]K_X phi <=> (<a_III>T => K_X[a_III]phi)", SchemaId.ACKN3A),
    ("A<+X => ([a_III]K_X phi <=> (<a_III>T => K_X[a_III]phi))", SchemaId.ACKN3B),
    ("[a_IV]K_A phi <=> (<a_IV>T => DK_{A,C}[a_IV]phi)", SchemaId.ACKN4A),
    ("A<+X => ([a_IV]K_X phi <=> (<a_IV>T => K_X[a_IV]phi))", SchemaId.ACKN4B),
    ("(X<+A & X<+C) => ([a]K_X phi <=> AND_{b ~X a}(<a>T => [b]phi))", SchemaId.ACKN_NP),
    ("A<B => A<+B", SchemaId.COR1),
    ("X<A => ~X<B", SchemaId.COR2),
    ("A<+C & C<+B1..Bn => DK_{B1..Bn}(A<+C)", SchemaId.COR3),
    ("A<+C & C<+B => K_B(A<+C)", SchemaId.COR4),
    ("B1..Bn <+ A & DK_{B1..Bn,A} phi => K_A phi", SchemaId.COR5),
    ("X<+A => [a_III]~(X<+C)", SchemaId.COR6),
    ("h' ~C h'' => prefixes ~C and last actions ~C", SchemaId.PERFECT_RECALL),
    ("h ~C h' & A<+C at last(h) => h ~A h'", SchemaId.SUBAGENT_MONO),
)


Bindings = Tuple[Tuple[str, str], ...]


@dataclass(frozen=True)
class Instance:
    """One closed formula; histories restricts where it is evaluated"""
    bindings: Bindings
    formula: Formula
    histories: Optional[Tuple[int, ...]] = None


@dataclass
class SchemaFailure:
    bindings: Dict[str, str]
    history: Optional[str]
    detail: str = ""


@dataclass
class SchemaReport:
    schema: SchemaId
    instances_checked: int = 0
    evaluations: int = 0
    failures: List[SchemaFailure] = field(default_factory=list)
    failure_count: int = 0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def record(self, failure: SchemaFailure):
        self.failure_count += 1
        if len(self.failures) < MAX_REPORTED_FAILURES:
            self.failures.append(failure)


JudgmentCheck = Callable[[HistoryUniverse], Tuple[int, List[SchemaFailure]]]


@dataclass(frozen=True)
class Judgment:
    """A relation on histories checked by a procedure rather than a formula"""
    schema: SchemaId
    check: JudgmentCheck


def _bind(**values) -> Bindings:
    def text(value) -> str:
        if isinstance(value, ActionLabel):
            return value.text
        if isinstance(value, Formula):
            return render_formula(value)
        if isinstance(value, (tuple, list)):
            return ", ".join(text(v) for v in value)
        return str(value)
    return tuple((key, text(value)) for key, value in values.items())


def formula_pool(agents: Sequence[str]) -> Tuple[Formula, ...]:
    """
    Test formulas substituted for free phi: every A<+B over distinct agents,
    their negations, and K_X(A<+X) per agent X with A the first other agent
    """
    atoms = [SubagentPlus(a, b) for a in agents for b in agents if a != b]
    known = []
    for x in agents:
        others = [a for a in agents if a != x]
        if others:
            known.append(Knows(x, SubagentPlus(others[0], x)))
    return tuple(atoms + [Not(atom) for atom in atoms] + known)


@dataclass(frozen=True)
class _Scope:
    universe: HistoryUniverse
    agents: Tuple[str, ...]
    labels: Tuple[ActionLabel, ...]
    pool: Tuple[Formula, ...]

    def of_kind(self, kind: ActionKind) -> List[ActionLabel]:
        return [label for label in self.labels if label.kind is kind]

    def executable(self, label: ActionLabel) -> Formula:
        return diamond(label, top(self.agents))

    def sub(self, lhs: str, rhs: str) -> Formula:
        return one_step(lhs, rhs, self.agents)

    def groups(self, excluded: Iterable[str] = (), sizes: Sequence[int] = (1, 2, 3)) -> List[Tuple[str, ...]]:
        members = [a for a in self.agents if a not in set(excluded)]
        return [group for size in sizes for group in combinations(members, size)]


def _plus(lhs: str, rhs: str) -> Formula:
    return SubagentPlus(lhs, rhs)


def _all_plus(members: Iterable[str], rhs: str, agents: Sequence[str]) -> Formula:
    return conjunction([_plus(m, rhs) for m in members], agents)


# ---------- consequences of the rule definitions ----------

def _cons_pre(kind: ActionKind, lhs_of: Callable[[ActionLabel], Tuple[str, str]],
              rhs_of: Callable[[ActionLabel], Tuple[str, str]]):
    def build(scope: _Scope) -> Iterator[Instance]:
        for label in scope.of_kind(kind):
            consequent = And(scope.sub(*lhs_of(label)), scope.sub(*rhs_of(label)))
            yield Instance(_bind(alpha=label), implication(scope.executable(label), consequent))
    return build


def _cons_post(kind: ActionKind, body_of: Callable[[_Scope, ActionLabel], Formula]):
    def build(scope: _Scope) -> Iterator[Instance]:
        for label in scope.of_kind(kind):
            yield Instance(_bind(alpha=label), Box(label, body_of(scope, label)))
    return build


# ---------- knowledge ----------

def _g1(scope: _Scope) -> Iterator[Instance]:
    for a in scope.agents:
        for phi in scope.pool:
            yield Instance(_bind(A=a, phi=phi), equivalence(DistKnows((a,), phi), Knows(a, phi)))


def _kto_dk(scope: _Scope) -> Iterator[Instance]:
    for a in scope.agents:
        for group in scope.groups(excluded=(a,)):
            for phi in scope.pool:
                yield Instance(_bind(A=a, B=group, phi=phi),
                               implication(Knows(a, phi), DistKnows((a,) + group, phi)))


def _kown(scope: _Scope) -> Iterator[Instance]:
    for a, c in permutations(scope.agents, 2):
        yield Instance(_bind(A=a, C=c), implication(_plus(a, c), Knows(c, _plus(a, c))))


def _dkown(scope: _Scope) -> Iterator[Instance]:
    for a, c, b in permutations(scope.agents, 3):
        for a1 in scope.agents:
            if a1 == b:
                continue
            yield Instance(_bind(A=a, C=c, B=b, A1=a1),
                           implication(And(_plus(a, c), _plus(c, b)), DistKnows((b, a1), _plus(a, c))))


def _kfrom_dk(scope: _Scope) -> Iterator[Instance]:
    for a in scope.agents:
        for group in scope.groups(excluded=(a,)):
            guard = _all_plus(group, a, scope.agents)
            for phi in scope.pool:
                yield Instance(_bind(A=a, B=group, phi=phi),
                               implication(And(guard, DistKnows(group, phi)), Knows(a, phi)))


# ---------- tree structure ----------

def _r(scope: _Scope) -> Iterator[Instance]:
    for a in scope.agents:
        yield Instance(_bind(A=a), Not(_plus(a, a)))


def _trans(scope: _Scope) -> Iterator[Instance]:
    for a, b, c in permutations(scope.agents, 3):
        yield Instance(_bind(A=a, B=b, C=c), implication(And(_plus(a, b), _plus(b, c)), _plus(a, c)))


def _tree(scope: _Scope) -> Iterator[Instance]:
    for a, b in combinations(scope.agents, 2):
        for x in scope.agents:
            if x in (a, b):
                continue
            yield Instance(_bind(X=x, A=a, B=b),
                           implication(And(_plus(x, a), _plus(x, b)),
                                       disjunction(_plus(a, b), _plus(b, a))))


def _partial_functionality(scope: _Scope) -> Iterator[Instance]:
    for label in scope.labels:
        for phi in scope.pool:
            yield Instance(_bind(alpha=label, phi=phi),
                           equivalence(Box(label, Not(phi)),
                                       implication(scope.executable(label), Not(Box(label, phi)))))


# ---------- preservation of facts ----------

def _preserved(scope: _Scope, label: ActionLabel, fact: Formula) -> Formula:
    return equivalence(Box(label, fact), implication(scope.executable(label), fact))


def _pf1(scope: _Scope) -> Iterator[Instance]:
    for label in scope.of_kind(ActionKind.I):
        for phi in scope.pool:
            yield Instance(_bind(alpha=label, phi=phi), _preserved(scope, label, phi))


def _pf_other(kind: ActionKind):
    # X != A: [alpha]X<Y <=> (<alpha>T => X<Y)
    def build(scope: _Scope) -> Iterator[Instance]:
        for label in scope.of_kind(kind):
            for x, y in permutations(scope.agents, 2):
                if x == label.executor_a:
                    continue
                yield Instance(_bind(alpha=label, X=x, Y=y), _preserved(scope, label, scope.sub(x, y)))
    return build


def _pf_mover(kind: ActionKind):
    # Y != E, C: [alpha]A<Y <=> (<alpha>T => A<Y)
    def build(scope: _Scope) -> Iterator[Instance]:
        for label in scope.of_kind(kind):
            a = label.executor_a
            for y in scope.agents:
                if y in (label.mediator, label.executor_c, a):
                    continue
                yield Instance(_bind(alpha=label, Y=y), _preserved(scope, label, scope.sub(a, y)))
    return build


def _pf4a(scope: _Scope) -> Iterator[Instance]:
    for label in scope.of_kind(ActionKind.IV):
        a, c = label.executor_a, label.executor_c
        for x in scope.agents:
            if x in (a, c):
                continue
            yield Instance(_bind(alpha=label, X=x),
                           implication(scope.sub(x, c), Box(label, scope.sub(x, a))))


def _pf4b(scope: _Scope) -> Iterator[Instance]:
    for label in scope.of_kind(ActionKind.IV):
        a, c = label.executor_a, label.executor_c
        for x, y in permutations(scope.agents, 2):
            if x == c:
                continue
            yield Instance(_bind(alpha=label, X=x, Y=y),
                           implication(Not(scope.sub(x, a)), _preserved(scope, label, scope.sub(x, y))))


# ---------- action and knowledge ----------

def _knowledge_law(scope: _Scope, label: ActionLabel, x: str, phi: Formula,
                   after: Optional[Tuple[str, ...]] = None) -> Formula:
    # [alpha]K_X phi <=> (<alpha>T => K_X[alpha]phi), or DK over `after` on the right
    knower = Knows(x, Box(label, phi)) if after is None else DistKnows(after, Box(label, phi))
    return equivalence(Box(label, Knows(x, phi)), implication(scope.executable(label), knower))


def _ackn_executors(kind: ActionKind):
    def build(scope: _Scope) -> Iterator[Instance]:
        for label in scope.of_kind(kind):
            for x in (label.executor_a, label.executor_c):
                for phi in scope.pool:
                    yield Instance(_bind(alpha=label, X=x, phi=phi), _knowledge_law(scope, label, x, phi))
    return build


def _ackn_guarded(kind: ActionKind, guard_of: Callable[[ActionLabel, str], Formula],
                  skip_of: Callable[[ActionLabel], Tuple[str, ...]] = lambda label: ()):
    def build(scope: _Scope) -> Iterator[Instance]:
        for label in scope.of_kind(kind):
            for x in scope.agents:
                if x in skip_of(label):
                    continue
                guard = guard_of(label, x)
                for phi in scope.pool:
                    yield Instance(_bind(alpha=label, X=x, phi=phi),
                                   implication(guard, _knowledge_law(scope, label, x, phi)))
    return build


def _ackn_single(kind: ActionKind, knower_of: Callable[[ActionLabel], str], distributed: bool):
    def build(scope: _Scope) -> Iterator[Instance]:
        for label in scope.of_kind(kind):
            x = knower_of(label)
            group = (label.executor_a, label.executor_c) if distributed else None
            for phi in scope.pool:
                yield Instance(_bind(alpha=label, X=x, phi=phi), _knowledge_law(scope, label, x, phi, group))
    return build


def _ackn_np(scope: _Scope) -> Iterator[Instance]:
    universe = scope.universe
    for label in scope.labels:
        a, c = label.executor_a, label.executor_c
        for x in scope.agents:
            if x in (a, c):
                continue
            guard = And(_plus(x, a), _plus(x, c))
            # the conjunction over beta depends on last(h); group histories by it
            by_betas: Dict[Tuple[ActionLabel, ...], List[int]] = {}
            for index, history in enumerate(universe.histories):
                betas = tuple(beta for beta in scope.labels
                              if action_equiv(x, history.last, label, beta))
                by_betas.setdefault(betas, []).append(index)
            for betas, members in by_betas.items():
                for phi in scope.pool:
                    rhs = conjunction([implication(scope.executable(label), Box(beta, phi)) for beta in betas],
                                      scope.agents)
                    law = equivalence(Box(label, Knows(x, phi)), rhs)
                    yield Instance(_bind(alpha=label, X=x, phi=phi, betas=betas),
                                   implication(guard, law), tuple(members))


# ---------- corollaries ----------

def _cor1(scope: _Scope) -> Iterator[Instance]:
    for a, b in permutations(scope.agents, 2):
        yield Instance(_bind(A=a, B=b), implication(scope.sub(a, b), _plus(a, b)))


def _cor2(scope: _Scope) -> Iterator[Instance]:
    for x, a, b in permutations(scope.agents, 3):
        yield Instance(_bind(X=x, A=a, B=b), implication(scope.sub(x, a), Not(scope.sub(x, b))))


def _cor3(scope: _Scope) -> Iterator[Instance]:
    for a, c in permutations(scope.agents, 2):
        for group in scope.groups(excluded=(a, c)):
            guard = And(_plus(a, c), conjunction([_plus(c, b) for b in group], scope.agents))
            yield Instance(_bind(A=a, C=c, B=group), implication(guard, DistKnows(group, _plus(a, c))))


def _cor4(scope: _Scope) -> Iterator[Instance]:
    for a, c, b in permutations(scope.agents, 3):
        yield Instance(_bind(A=a, C=c, B=b),
                       implication(And(_plus(a, c), _plus(c, b)), Knows(b, _plus(a, c))))


def _cor5(scope: _Scope) -> Iterator[Instance]:
    for a in scope.agents:
        for group in scope.groups(excluded=(a,)):
            guard = _all_plus(group, a, scope.agents)
            for phi in scope.pool:
                yield Instance(_bind(A=a, B=group, phi=phi),
                               implication(And(guard, DistKnows(group + (a,), phi)), Knows(a, phi)))


def _cor6(scope: _Scope) -> Iterator[Instance]:
    for label in scope.of_kind(ActionKind.III):
        a, c = label.executor_a, label.executor_c
        for x in scope.agents:
            if x == a:
                continue
            yield Instance(_bind(alpha=label, X=x),
                           implication(_plus(x, a), Box(label, Not(_plus(x, c)))))


# ---------- S5 laws of K ----------

def _knowledge_s5(law: str):
    def build(scope: _Scope) -> Iterator[Instance]:
        for x in scope.agents:
            for phi in scope.pool:
                known = Knows(x, phi)
                if law == "T":
                    formula = implication(known, phi)
                elif law == "4":
                    formula = implication(known, Knows(x, known))
                else:
                    formula = implication(Not(known), Knows(x, Not(known)))
                yield Instance(_bind(X=x, phi=phi), formula)
    return build


# ---------- judgments ----------

def _perfect_recall(universe: HistoryUniverse) -> Tuple[int, List[SchemaFailure]]:
    checked, found = perfect_recall_failures(universe)
    return checked, [SchemaFailure({"C": f.observer, "other": universe.path_of(f.second)},
                                   universe.path_of(f.first), f.reason) for f in found]


def _subagent_mono(universe: HistoryUniverse) -> Tuple[int, List[SchemaFailure]]:
    checked, found = subagent_mono_failures(universe)
    return checked, [SchemaFailure({"C": f.observer, "A": f.subagent, "other": universe.path_of(f.second)},
                                   universe.path_of(f.first), f.reason) for f in found]


def _state_validity(universe: HistoryUniverse) -> Tuple[int, List[SchemaFailure]]:
    failures: List[SchemaFailure] = []
    seen = set()
    for index, history in enumerate(universe.histories):
        state = history.last
        if state in seen:
            continue
        seen.add(state)
        try:
            validate_state(state.as_dict(), universe.agents)
        except StateError as error:
            failures.append(SchemaFailure({"state": str(state)}, universe.path_of(index), error.message))
    return len(seen), failures


def _determinism(universe: HistoryUniverse) -> Tuple[int, List[SchemaFailure]]:
    failures: List[SchemaFailure] = []
    checked = 0
    for source, label, target in universe.edges():
        checked += 1
        before, after = universe.histories[source].last, universe.histories[target].last
        try:
            again = apply(before, label)
        except NotExecutable as error:
            failures.append(SchemaFailure({"alpha": label.text}, universe.path_of(source), error.message))
            continue
        if again != after:
            failures.append(SchemaFailure({"alpha": label.text}, universe.path_of(source),
                                          f"re-applied to {again}, recorded {after}"))
    return checked, failures


def _oracle_agreement(universe: HistoryUniverse) -> Tuple[int, List[SchemaFailure]]:
    run = cross_check(universe)
    return run.queries, [SchemaFailure({"check": d.check, "subject": d.subject}, None,
                                       f"expected {d.expected}, got {d.actual}") for d in run.discrepancies]


InstanceBuilder = Callable[[_Scope], Iterator[Instance]]

CATALOG: Dict[SchemaId, Union[InstanceBuilder, JudgmentCheck]] = {
    SchemaId.CONS_II_PRE: _cons_pre(ActionKind.II, lambda l: (l.executor_a, l.mediator),
                                    lambda l: (l.executor_c, l.mediator)),
    SchemaId.CONS_III_PRE: _cons_pre(ActionKind.III, lambda l: (l.executor_a, l.executor_c),
                                     lambda l: (l.executor_c, l.mediator)),
    SchemaId.CONS_IV_PRE: _cons_pre(ActionKind.IV, lambda l: (l.executor_a, l.mediator),
                                    lambda l: (l.executor_c, l.mediator)),
    SchemaId.CONS_II_POST: _cons_post(ActionKind.II, lambda s, l: s.sub(l.executor_a, l.executor_c)),
    SchemaId.CONS_III_POST: _cons_post(ActionKind.III, lambda s, l: s.sub(l.executor_a, l.mediator)),
    SchemaId.CONS_IV_POST: _cons_post(ActionKind.IV, lambda s, l: Not(s.sub(l.executor_c, l.mediator))),
    SchemaId.G1: _g1,
    SchemaId.KTO_DK: _kto_dk,
    SchemaId.KOWN: _kown,
    SchemaId.DKOWN: _dkown,
    SchemaId.KFROM_DK: _kfrom_dk,
    SchemaId.R: _r,
    SchemaId.TRANS: _trans,
    SchemaId.TREE: _tree,
    SchemaId.PARTIAL_FUNCTIONALITY: _partial_functionality,
    SchemaId.PF1: _pf1,
    SchemaId.PF2A: _pf_other(ActionKind.II),
    SchemaId.PF2B: _pf_mover(ActionKind.II),
    SchemaId.PF3A: _pf_other(ActionKind.III),
    SchemaId.PF3B: _pf_mover(ActionKind.III),
    SchemaId.PF4A: _pf4a,
    SchemaId.PF4B: _pf4b,
    SchemaId.ACKN1A: _ackn_executors(ActionKind.I),
    SchemaId.ACKN1B: _ackn_guarded(ActionKind.I, lambda l, x: disjunction(_plus(l.executor_a, x),
                                                                          _plus(l.executor_c, x))),
    SchemaId.ACKN2A: _ackn_single(ActionKind.II, lambda l: l.executor_c, distributed=True),
    SchemaId.ACKN2B: _ackn_guarded(ActionKind.II, lambda l, x: _plus(l.executor_c, x),
                                   lambda l: (l.executor_c,)),
    SchemaId.ACKN2C: _ackn_single(ActionKind.II, lambda l: l.executor_a, distributed=False),
    SchemaId.ACKN3A: _ackn_executors(ActionKind.III),
    SchemaId.ACKN3B: _ackn_guarded(ActionKind.III, lambda l, x: _plus(l.executor_a, x),
                                   lambda l: (l.executor_a,)),
    SchemaId.ACKN4A: _ackn_single(ActionKind.IV, lambda l: l.executor_a, distributed=True),
    SchemaId.ACKN4B: _ackn_guarded(ActionKind.IV, lambda l, x: _plus(l.executor_a, x),
                                   lambda l: (l.executor_a,)),
    SchemaId.ACKN_NP: _ackn_np,
    SchemaId.COR1: _cor1,
    SchemaId.COR2: _cor2,
    SchemaId.COR3: _cor3,
    SchemaId.COR4: _cor4,
    SchemaId.COR5: _cor5,
    SchemaId.COR6: _cor6,
    SchemaId.PERFECT_RECALL: _perfect_recall,
    SchemaId.SUBAGENT_MONO: _subagent_mono,
    SchemaId.KT: _knowledge_s5("T"),
    SchemaId.K4: _knowledge_s5("4"),
    SchemaId.K5: _knowledge_s5("5"),
    SchemaId.STATE_VALIDITY: _state_validity,
    SchemaId.DETERMINISM: _determinism,
    SchemaId.ORACLE_AGREEMENT: _oracle_agreement,
}

JUDGMENTS = frozenset({
    SchemaId.PERFECT_RECALL, SchemaId.SUBAGENT_MONO, SchemaId.STATE_VALIDITY,
    SchemaId.DETERMINISM, SchemaId.ORACLE_AGREEMENT,
})


def catalog_gaps() -> List[str]:
    """Displayed laws without a catalogue entry, and entries tied to no displayed law"""
    gaps = [law for law, schema in DISPLAYED_LAWS if schema not in CATALOG]
    covered = {schema for _, schema in DISPLAYED_LAWS}
    gaps += [schema.value for schema in SchemaId
             if schema not in covered and schema not in SUPPLEMENTARY]
    return gaps


def _scope(model: ModelFile, universe: HistoryUniverse) -> _Scope:
    return _Scope(universe, tuple(model.agents), tuple(universe.edge_labels()), formula_pool(model.agents))


def instantiate(schema: SchemaId, model: ModelFile, universe: HistoryUniverse
                ) -> List[Union[Instance, Judgment]]:
    """Closed instances of a schema, or a single Judgment for history relations"""
    if schema in JUDGMENTS:
        return [Judgment(schema, CATALOG[schema])]
    return list(CATALOG[schema](_scope(model, universe)))


def check_schema(schema: SchemaId, ctx: EvalContext) -> SchemaReport:
    """Evaluate one schema over the admissible histories of the context's universe"""
    universe = ctx.universe
    report = SchemaReport(schema)
    for item in instantiate(schema, universe.model, universe):
        if isinstance(item, Judgment):
            checked, failures = item.check(universe)
            report.instances_checked += 1
            report.evaluations += checked
            for failure in failures:
                report.record(failure)
            continue

        report.instances_checked += 1
        limit = universe.depth - box_depth(item.formula)
        candidates = range(len(universe)) if item.histories is None else item.histories
        admissible = [i for i in candidates if len(universe.histories[i]) <= limit]
        if not admissible:
            continue
        try:
            verdict = valid_in_universe(ctx, item.formula, admissible)
        except DepthInsufficient as error:
            report.record(SchemaFailure(dict(item.bindings), error.context.location, error.message))
            continue
        report.evaluations += verdict.checked
        if not verdict.valid:
            report.record(SchemaFailure(dict(item.bindings), universe.path_of(verdict.counterexample)))
    return report


def check_catalog(universe: HistoryUniverse, schemas: Optional[Iterable[SchemaId]] = None,
                  strict: bool = True) -> List[SchemaReport]:
    """Reports in catalogue order; strict depth mode unless turned off"""
    wanted = set(schemas) if schemas is not None else set(SchemaId)
    ctx = EvalContext(universe, strict=strict)
    return [check_schema(schema, ctx) for schema in SchemaId if schema in wanted]


def verify(model: ModelFile, depth: int, schemas: Optional[Iterable[SchemaId]] = None,
           mutations: Sequence[Mutation] = (), budget: int = DEFAULT_BUDGET,
           depth_cap: int = DEFAULT_DEPTH_CAP) -> List[SchemaReport]:
    """
    Generate the universe and check the catalogue, optionally under rule mutations

    Args:
        model: Parsed model file
        depth: Universe depth
        schemas: Subset of the catalogue (all when None)
        mutations: Rule mutations active for the whole run
        budget: History budget passed to generation
        depth_cap: Depth cap passed to generation

    Returns:
        One SchemaReport per requested schema
    """
    with mutated(*mutations):
        universe = generate_universe(model, depth, budget, depth_cap)
        return check_catalog(universe, schemas)
