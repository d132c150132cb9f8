"""Syntax tree for BeePath descriptions.

Source positions are carried for diagnostics but excluded from equality, so two
trees parsed from differently formatted texts compare equal when they describe
the same statements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Variant(str, Enum):
    SEQUENCE = "Sequence"
    PARALLEL_SPLIT = "ParallelSplit"
    SYNCHRONIZATION = "Synchronization"
    EXCLUSIVE_CHOICE = "ExclusiveChoice"
    SIMPLE_MERGE = "SimpleMerge"
    REPEAT_SINCE = "RepeatSince"
    EVENTUALLY = "Eventually"
    AND_SPLIT_IN_XOR_SPLIT = "AndSplitInXorSplit"
    XOR_SPLIT_IN_AND_SPLIT = "XorSplitInAndSplit"
    AND_JOIN_IN_XOR_JOIN = "AndJoinInXorJoin"
    XOR_JOIN_IN_AND_JOIN = "XorJoinInAndJoin"
    AND_SUBPROCESS = "AndSubprocess"
    OR_SUBPROCESS = "OrSubprocess"

    def __str__(self) -> str:
        return self.value


SUBPROCESS_VARIANTS = frozenset({Variant.AND_SUBPROCESS, Variant.OR_SUBPROCESS})

# one source, parallel targets
SPLIT_VARIANTS = frozenset({Variant.PARALLEL_SPLIT, Variant.XOR_SPLIT_IN_AND_SPLIT})
# one source, exclusive targets
CHOICE_VARIANTS = frozenset({Variant.EXCLUSIVE_CHOICE, Variant.AND_SPLIT_IN_XOR_SPLIT})
# synchronized sources, one target
JOIN_VARIANTS = frozenset({Variant.SYNCHRONIZATION, Variant.XOR_JOIN_IN_AND_JOIN})
# alternative sources, one target
MERGE_VARIANTS = frozenset({Variant.SIMPLE_MERGE, Variant.AND_JOIN_IN_XOR_JOIN})
PAIR_VARIANTS = frozenset({Variant.SEQUENCE, Variant.EVENTUALLY})

NESTED_VARIANTS = frozenset({
    Variant.AND_SPLIT_IN_XOR_SPLIT,
    Variant.XOR_SPLIT_IN_AND_SPLIT,
    Variant.AND_JOIN_IN_XOR_JOIN,
    Variant.XOR_JOIN_IN_AND_JOIN,
})

FLOW_VARIANTS = tuple(v for v in Variant if v not in SUBPROCESS_VARIANTS)


@dataclass(frozen=True)
class ActRef:
    """An activity name, or a subprocess identifier when ``subprocess`` is set."""

    name: str
    subprocess: bool = False
    line: int = field(default=1, compare=False, repr=False)
    column: int = field(default=1, compare=False, repr=False)

    def __str__(self) -> str:
        return f"({self.name})" if self.subprocess else f'"{self.name}"'


def act(name: str) -> ActRef:
    return ActRef(name)


def sub(name: str) -> ActRef:
    return ActRef(name, subprocess=True)


@dataclass(frozen=True)
class Fragment:
    variant: Variant
    args: tuple[ActRef, ...]
    subprocess_id: str | None = None
    line: int = field(default=1, compare=False, repr=False)
    column: int = field(default=1, compare=False, repr=False)

    @property
    def is_subprocess(self) -> bool:
        return self.variant in SUBPROCESS_VARIANTS

    @property
    def sources(self) -> tuple[ActRef, ...]:
        """References whose end this fragment consumes."""
        if self.is_subprocess:
            return ()
        if self.variant in JOIN_VARIANTS or self.variant in MERGE_VARIANTS:
            return self.args[:-1]
        return self.args[:1]

    @property
    def targets(self) -> tuple[ActRef, ...]:
        """References this fragment starts, including a repeat target."""
        if self.is_subprocess:
            return ()
        if self.variant in JOIN_VARIANTS or self.variant in MERGE_VARIANTS:
            return self.args[-1:]
        return self.args[1:]


@dataclass(frozen=True)
class Closing:
    mode: str  # "single" | "conjunctive" | "disjunctive"
    args: tuple[ActRef, ...]
    line: int = field(default=1, compare=False, repr=False)
    column: int = field(default=1, compare=False, repr=False)


@dataclass(frozen=True)
class Description:
    leading_text: str
    initial: str
    fragments: tuple[Fragment, ...]
    closing: Closing
    initial_line: int = field(default=1, compare=False, repr=False)
    initial_column: int = field(default=1, compare=False, repr=False)

    def __post_init__(self):
        if not self.fragments:
            raise ValueError("a description needs at least one fragment")
