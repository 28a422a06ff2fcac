"""
Structured output records for --format json
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from src.axiom_suite import SchemaReport
from src.histories import HistoryUniverse
from src.parser import serialize
from src.state_model import State, forest_of


class UniverseStats(BaseModel):
    """Size of a generated universe"""
    depth: int = Field(description="Maximum history size")
    histories: int = Field(description="Number of histories")
    per_length: Dict[int, int] = Field(description="History count per size")
    reachable_states: int = Field(description="Distinct states in the universe")
    transitions: int = Field(description="Universe edges")

    @classmethod
    def of(cls, universe: HistoryUniverse) -> "UniverseStats":
        return cls(
            depth=universe.depth,
            histories=len(universe),
            per_length=universe.counts_per_length(),
            reachable_states=len(universe.reachable_states()),
            transitions=sum(1 for _ in universe.edges()),
        )


class StateRecord(BaseModel):
    name: str = Field(description="Initial state name or history path")
    assignment: Dict[str, str] = Field(description="Agent -> serialized process")
    parents: Dict[str, str] = Field(default_factory=dict, description="Agent -> one-step superagent")
    roots: List[str] = Field(default_factory=list, description="Agents with no superagent")

    @classmethod
    def of(cls, name: str, state: State) -> "StateRecord":
        forest = forest_of(state)
        return cls(
            name=name,
            assignment={agent: process.text for agent, process in state.assignment},
            parents=dict(sorted(forest.parent.items())),
            roots=sorted(forest.roots),
        )


class ValidationRecord(BaseModel):
    model: str = Field(description="Model file path")
    agents: List[str] = Field(description="Declared agents")
    states: List[StateRecord] = Field(description="Validated initial states")
    formulas: Dict[str, str] = Field(default_factory=dict, description="Named formulas, desugared")
    valid: bool = Field(default=True, description="Every initial state satisfies the state constraint")


class StepRecord(BaseModel):
    action: str = Field(description="Applied action label")
    before: StateRecord = Field(description="Pre-state")
    after: StateRecord = Field(description="Post-state")
    ambiguous: bool = Field(default=False, description="Several redexes gave different post-states")
    alternatives: List[str] = Field(default_factory=list, description="Every distinct post-state when ambiguous")


class HistoryRecord(BaseModel):
    path: str = Field(description="History path, e.g. s0/0/1")
    size: int = Field(description="Number of actions")
    actions: List[str] = Field(description="Action labels in order")
    last: str = Field(description="Serialized last state")
    enabled: List[str] = Field(default_factory=list, description="Actions enabled at the last state")


class ExploreRecord(BaseModel):
    model: str = Field(description="Model file path")
    stats: UniverseStats = Field(description="Universe statistics")
    histories: List[HistoryRecord] = Field(description="Every history in enumeration order")
    diagnostics: List[str] = Field(default_factory=list, description="Ambiguous-redex warnings")
    dot_files: List[str] = Field(default_factory=list, description="DOT files written")


class VerdictRecord(BaseModel):
    formula: str = Field(description="Checked formula, core syntax")
    history: Optional[str] = Field(default=None, description="History path, or None for validity over the universe")
    verdict: bool = Field(description="Satisfied (or valid)")
    counterexample: Optional[str] = Field(default=None, description="First failing history path")
    checked: int = Field(description="Histories evaluated")
    seconds: float = Field(description="Wall-clock evaluation time")
    stats: UniverseStats = Field(description="Universe statistics")


class FailureRecord(BaseModel):
    bindings: Dict[str, str] = Field(description="Schema variables and their values")
    history: Optional[str] = Field(default=None, description="Counterexample history path")
    detail: str = Field(default="", description="Extra explanation")


class SchemaReportRecord(BaseModel):
    schema_id: str = Field(description="Catalogue entry")
    passed: bool = Field(description="No failing instance")
    instances_checked: int = Field(description="Instances (or judgments) checked")
    evaluations: int = Field(description="Instance-history evaluations")
    failure_count: int = Field(description="All failures, including unreported ones")
    failures: List[FailureRecord] = Field(default_factory=list, description="Reported failures")

    @classmethod
    def of(cls, report: SchemaReport) -> "SchemaReportRecord":
        return cls(
            schema_id=report.schema.value,
            passed=report.passed,
            instances_checked=report.instances_checked,
            evaluations=report.evaluations,
            failure_count=report.failure_count,
            failures=[FailureRecord(bindings=f.bindings, history=f.history, detail=f.detail)
                      for f in report.failures],
        )


class AxiomRunRecord(BaseModel):
    model: str = Field(description="Model file path")
    mutations: List[str] = Field(default_factory=list, description="Active rule mutations")
    strict_depth: bool = Field(default=True, description="Catalogue evaluated in strict depth mode")
    stats: UniverseStats = Field(description="Universe statistics")
    pool_size: int = Field(description="Number of test formulas substituted for phi")
    reports: List[SchemaReportRecord] = Field(description="One entry per schema, catalogue order")
    passed: bool = Field(description="Every schema passed")
    seconds: float = Field(description="Wall-clock time")


def history_record(universe: HistoryUniverse, index: int, enabled: Optional[List[str]] = None) -> HistoryRecord:
    history = universe.histories[index]
    return HistoryRecord(
        path=universe.path_of(index),
        size=len(history),
        actions=[label.text for label in history.actions],
        last=serialize(history.last),
        enabled=enabled or [],
    )
