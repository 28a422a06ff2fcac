"""
Rule mutations for mutation testing of the axiom catalog.
A mutation is active only inside a `mutated(...)` block.
"""

from contextlib import contextmanager
from contextvars import ContextVar
from enum import Enum
from typing import FrozenSet, Iterator


class Mutation(Enum):
    """Deliberate rule corruptions"""
    DROP_MEDIATOR_UPDATE = "drop-e-update"          # Type II leaves s(E) untouched
    KEEP_MERGED_IN_MEDIATOR = "keep-c-in-e"         # Type IV leaves C inside E
    SKIP_SUM_CONSUMPTION = "skip-sum-consumption"   # Type I keeps both sums
    IRREFLEXIVE_SUBAGENT = "irreflexive-refl"       # <=+ loses A <=+ A
    IGNORE_ACTIONS = "ignore-actions"               # history equivalence skips actions


_ACTIVE: ContextVar[FrozenSet[Mutation]] = ContextVar("padel_mutations", default=frozenset())


def is_active(mutation: Mutation) -> bool:
    return mutation in _ACTIVE.get()


def active_mutations() -> FrozenSet[Mutation]:
    return _ACTIVE.get()


@contextmanager
def mutated(*mutations: Mutation) -> Iterator[FrozenSet[Mutation]]:
    token = _ACTIVE.set(_ACTIVE.get() | frozenset(mutations))
    try:
        yield _ACTIVE.get()
    finally:
        _ACTIVE.reset(token)
