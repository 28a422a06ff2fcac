"""
Model Checker
Evaluates core formulas at the histories of a bounded universe
"""

from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple, Union

from src.error_handler import DepthInsufficient
from src.histories import History, HistoryUniverse
from src.mutations import active_mutations
from src.state_model import subagent_iter
from src.syntax import And, Box, DistKnows, Formula, Knows, Not, SubagentPlus, desugar, is_core
from src.transitions import executable

HistoryRef = Union[int, str, History]


class EvalContext:
    """Universe plus a memo of (history index, formula) results"""

    def __init__(self, universe: HistoryUniverse, strict: bool = False):
        """
        Args:
            universe: Generated history universe
            strict: Raise DepthInsufficient instead of treating a box at the
                depth boundary as vacuously true
        """
        self.universe = universe
        self.strict = strict
        self.cache: Dict[Tuple[int, Formula, frozenset], bool] = {}
        self.evaluations = 0

    def index(self, ref: HistoryRef) -> int:
        if isinstance(ref, int):
            return ref
        if isinstance(ref, str):
            return self.universe.resolve(ref)
        return self.universe.index_of(ref)

    def core(self, formula: Formula) -> Formula:
        return formula if is_core(formula) else desugar(formula, self.universe.agents)


@dataclass(frozen=True)
class Verdict:
    formula: Formula
    valid: bool
    counterexample: Optional[int]
    checked: int


def satisfies(ctx: EvalContext, history: HistoryRef, formula: Formula) -> bool:
    """h |= phi"""
    return _eval(ctx, ctx.index(history), ctx.core(formula))


def _eval(ctx: EvalContext, index: int, formula: Formula) -> bool:
    key = (index, formula, active_mutations())
    cached = ctx.cache.get(key)
    if cached is not None:
        return cached
    ctx.evaluations += 1
    result = _clause(ctx, index, formula)
    ctx.cache[key] = result
    return result


def _clause(ctx: EvalContext, index: int, formula: Formula) -> bool:
    universe = ctx.universe
    history = universe.histories[index]

    if isinstance(formula, SubagentPlus):
        return subagent_iter(formula.lhs, formula.rhs, history.last)
    if isinstance(formula, Not):
        return not _eval(ctx, index, formula.body)
    if isinstance(formula, And):
        return _eval(ctx, index, formula.left) and _eval(ctx, index, formula.right)
    if isinstance(formula, Knows):
        return all(_eval(ctx, j, formula.body)
                   for j in universe.equivalence_class(formula.agent, index))
    if isinstance(formula, DistKnows):
        return all(_eval(ctx, j, formula.body)
                   for j in universe.group_class(formula.agents, index))
    if isinstance(formula, Box):
        if len(history) >= universe.depth:
            if ctx.strict and executable(history.last, formula.action):
                raise DepthInsufficient(
                    f"{formula.action.text} is executable at {universe.path_of(index)} "
                    f"but the universe stops at depth {universe.depth}",
                    location=universe.path_of(index), depth=universe.depth)
            return True
        return all(_eval(ctx, j, formula.body)
                   for j in universe.successors(index, formula.action))
    raise TypeError(f"Not a core formula: {formula!r}")


def valid_in_universe(ctx: EvalContext, formula: Formula,
                      histories: Optional[Iterable[int]] = None) -> Verdict:
    """phi holds at every history (or every listed one); the first failure is the counterexample"""
    core = ctx.core(formula)
    indices = range(len(ctx.universe)) if histories is None else histories
    checked = 0
    for index in indices:
        checked += 1
        if not _eval(ctx, index, core):
            return Verdict(formula, False, index, checked)
    return Verdict(formula, True, None, checked)
