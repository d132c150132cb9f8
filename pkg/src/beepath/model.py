"""Global storage for a parsed description and its semantic checks.

:func:`analyze` walks the syntax tree once, in statement order, registering
every activity and subprocess and resolving subprocess references.
:func:`validate` then reports modelling problems as warnings.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

from .diagnostics import BeePathSemanticError, Diagnostic, error, warning
from .frontend.ast import (
    ActRef,
    Closing,
    Description,
    Fragment,
    Variant,
)

INIT = "__INIT__"
END = "__END__"
RESERVED = frozenset({INIT, END})


class ActivityRegistry:
    """Insertion-ordered mapping from activity names to dense integer ids."""

    def __init__(self):
        self._ids: dict[str, int] = {}
        self._first_seen: dict[str, tuple[int, int]] = {}

    def add(self, name: str, line: int = 1, column: int = 1) -> int:
        if name not in self._ids:
            self._ids[name] = len(self._ids)
            self._first_seen[name] = (line, column)
        return self._ids[name]

    def id(self, name: str) -> int:
        return self._ids[name]

    def position(self, name: str) -> tuple[int, int]:
        return self._first_seen[name]

    @property
    def names(self) -> list[str]:
        return list(self._ids)

    def __contains__(self, name) -> bool:
        return name in self._ids

    def __iter__(self):
        return iter(self._ids)

    def __len__(self) -> int:
        return len(self._ids)

    def __eq__(self, other) -> bool:
        return isinstance(other, ActivityRegistry) and list(self._ids.items()) == list(other._ids.items())

    def __repr__(self) -> str:
        return f"ActivityRegistry({self.names!r})"


@dataclass(frozen=True)
class Subprocess:
    name: str
    kind: str  # "AND" | "OR"
    members: tuple[str, ...]
    index: int


@dataclass(frozen=True)
class FragmentInstance:
    variant: Variant
    args: tuple[ActRef, ...]
    index: int
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)

    @property
    def sources(self) -> tuple[ActRef, ...]:
        return Fragment(self.variant, self.args).sources

    @property
    def targets(self) -> tuple[ActRef, ...]:
        return Fragment(self.variant, self.args).targets


@dataclass
class ProcessSpec:
    registry: ActivityRegistry
    subprocesses: dict[str, Subprocess]
    fragments: list[FragmentInstance]
    initial: str
    closing: Closing

    def members(self, ref: ActRef) -> tuple[str, ...]:
        """Activity names a reference stands for."""
        if ref.subprocess:
            return self.subprocesses[ref.name].members
        return (ref.name,)

    def kind(self, ref: ActRef) -> str | None:
        return self.subprocesses[ref.name].kind if ref.subprocess else None


def analyze(d: Description) -> ProcessSpec:
    """Resolve a description into a :class:`ProcessSpec`.

    Subprocesses must be declared before their first use.  Raises
    :class:`BeePathSemanticError` with every problem found.
    """
    registry = ActivityRegistry()
    subprocesses: dict[str, Subprocess] = {}
    fragments: list[FragmentInstance] = []
    errors: list[Diagnostic] = []
    declared_later = {f.subprocess_id for f in d.fragments if f.is_subprocess}

    def register(ref: ActRef) -> None:
        if ref.subprocess:
            if ref.name not in subprocesses:
                if ref.name in declared_later:
                    errors.append(error(f"subprocess {ref.name} used before its declaration", ref.line, ref.column))
                else:
                    errors.append(error(f"undeclared subprocess {ref.name}", ref.line, ref.column))
            return
        if ref.name in RESERVED:
            errors.append(error(f"reserved activity name {ref.name}", ref.line, ref.column))
            return
        registry.add(ref.name, ref.line, ref.column)

    if d.initial in RESERVED:
        errors.append(error(f"reserved activity name {d.initial}", d.initial_line, d.initial_column))
    else:
        registry.add(d.initial, d.initial_line, d.initial_column)

    for index, f in enumerate(d.fragments):
        if f.is_subprocess:
            for m in f.args:
                register(m)
            if f.subprocess_id in subprocesses:
                errors.append(error(f"duplicate subprocess id {f.subprocess_id}", f.line, f.column))
                continue
            members = tuple(dict.fromkeys(m.name for m in f.args))
            if len(members) < 2:
                errors.append(error(f"subprocess {f.subprocess_id} needs at least two distinct activities", f.line, f.column))
            kind = "AND" if f.variant is Variant.AND_SUBPROCESS else "OR"
            subprocesses[f.subprocess_id] = Subprocess(f.subprocess_id, kind, members, index)
        else:
            for ref in f.args:
                register(ref)
            fragments.append(FragmentInstance(f.variant, f.args, index, f.line, f.column))

    for ref in d.closing.args:
        register(ref)

    if errors:
        raise BeePathSemanticError(errors)
    return ProcessSpec(registry, subprocesses, fragments, d.initial, d.closing)


def fragment_edges(p: ProcessSpec, f: FragmentInstance) -> list[tuple[str, str]]:
    """Activity-level (source, target) pairs a fragment orders."""
    sources = [m for r in f.sources for m in p.members(r)]
    targets = [m for r in f.targets for m in p.members(r)]
    return [(s, t) for s in sources for t in targets]


def validate(p: ProcessSpec) -> list[Diagnostic]:
    """Warnings about incomplete or disconnected models; never raises."""
    out: list[Diagnostic] = []
    names = p.registry.names

    def at(name: str) -> tuple[int, int]:
        return p.registry.position(name)

    started = {p.initial}
    consumed = set()
    repeat_targets: list[tuple[str, FragmentInstance]] = []
    for f in p.fragments:
        targets = f.args[2:] if f.variant is Variant.REPEAT_SINCE else f.targets
        started.update(m for r in targets for m in p.members(r))
        consumed.update(m for r in f.sources for m in p.members(r))
        if f.variant is Variant.REPEAT_SINCE:
            repeat_targets.append((f.args[1].name, f))
    closing = {m for r in p.closing.args for m in p.members(r)}

    never_started = [n for n in names if n not in started]
    if never_started:
        out.append(warning("activities never started: " + ", ".join(never_started), *at(never_started[0])))
    dangling = [n for n in names if n not in consumed and n not in closing]
    if dangling:
        out.append(warning("activities whose end leads nowhere: " + ", ".join(dangling), *at(dangling[0])))
    for target, f in repeat_targets:
        if target not in started:
            out.append(warning(f"repeat target {target} is never started", f.line, f.column))

    graph = defaultdict(set)
    for f in p.fragments:
        for s, t in fragment_edges(p, f):
            graph[s].add(t)
    seen = {p.initial}
    queue = deque([p.initial])
    while queue:
        for nxt in graph[queue.popleft()]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    unreachable = [n for n in names if n not in seen]
    if unreachable:
        out.append(warning("unreachable activities: " + ", ".join(unreachable), *at(unreachable[0])))

    by_source = defaultdict(list)
    for f in p.fragments:
        for m in {m for r in f.sources for m in p.members(r)}:
            by_source[m].append(f)
    for name in names:
        fs = by_source.get(name, [])
        if len(fs) > 1:
            where = ", ".join(str(f.line) for f in fs)
            out.append(warning(f"{name} ends in several fragments (lines {where}); "
                               "they will all fire together", fs[1].line, fs[1].column))

    for name in names:
        if name in ("init", "end"):
            out.append(warning(f"activity {name!r} collides with the artificial {name} event in DECLARE output",
                               *at(name)))
    return out
