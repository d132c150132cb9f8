"""Place/transition nets without arc weights and their token game."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping

logger = logging.getLogger(__name__)

Marking = Mapping[str, int]

CAPACITY_WARNING = 3
DEFAULT_MAX_STATES = 100_000


class FiringError(ValueError):
    """A transition was fired from a marking that does not enable it."""


class StateBudgetExceeded(RuntimeError):
    def __init__(self, max_states: int):
        self.max_states = max_states
        super().__init__(f"state budget exceeded: more than {max_states} distinct markings explored")


@dataclass
class PetriNet:
    """A labelled P/T net.

    Transitions map to their label, ``None`` marking a silent transition.
    ``provenance`` records, for nodes created by translation, what produced
    them; it has no behavioural meaning.
    """

    places: list[str] = field(default_factory=list)
    transitions: dict[str, str | None] = field(default_factory=dict)
    arcs: set[tuple[str, str]] = field(default_factory=set)
    initial_marking: dict[str, int] = field(default_factory=dict)
    final_marking: dict[str, int] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)

    def add_place(self, pid: str, origin: str | None = None) -> str:
        if pid in self.transitions:
            raise ValueError(f"{pid!r} is already a transition")
        if pid not in self.places:
            self.places.append(pid)
        if origin:
            self.provenance.setdefault(pid, origin)
        return pid

    def add_transition(self, tid: str, label: str | None = None, origin: str | None = None) -> str:
        if tid in self.places:
            raise ValueError(f"{tid!r} is already a place")
        self.transitions[tid] = label
        if origin:
            self.provenance.setdefault(tid, origin)
        return tid

    def add_arc(self, src: str, dst: str) -> None:
        src_place = src in self.places
        dst_place = dst in self.places
        if not (src_place or src in self.transitions) or not (dst_place or dst in self.transitions):
            raise ValueError(f"arc {src!r} -> {dst!r} references an unknown node")
        if src_place == dst_place:
            raise ValueError(f"arc {src!r} -> {dst!r} must connect a place and a transition")
        self.arcs.add((src, dst))

    def preset(self, node: str) -> list[str]:
        return sorted(s for s, d in self.arcs if d == node)

    def postset(self, node: str) -> list[str]:
        return sorted(d for s, d in self.arcs if s == node)

    @property
    def silent_transitions(self) -> list[str]:
        return sorted(t for t, label in self.transitions.items() if label is None)

    @property
    def labeled_transitions(self) -> list[str]:
        return sorted(t for t, label in self.transitions.items() if label is not None)


@dataclass(frozen=True)
class FiringSequence:
    transitions: tuple[str, ...]
    labels: tuple[str | None, ...]
    marking: tuple[tuple[str, int], ...]

    def __len__(self) -> int:
        return len(self.transitions)


def _check_marking(net: PetriNet, m: Marking) -> None:
    unknown = [p for p in m if p not in net.places]
    if unknown:
        raise ValueError(f"marking references unknown place(s): {', '.join(map(str, unknown))}")
    negative = [p for p, k in m.items() if k < 0]
    if negative:
        raise ValueError(f"negative token count on {', '.join(negative)}")


def enabled(net: PetriNet, m: Marking) -> set[str]:
    """Transitions whose every input place holds a token."""
    _check_marking(net, m)
    pre = {t: [] for t in net.transitions}
    for s, d in net.arcs:
        if d in pre:
            pre[d].append(s)
    return {t for t, ins in pre.items() if ins and all(m.get(p, 0) >= 1 for p in ins)}


def fire(net: PetriNet, m: Marking, t: str) -> dict[str, int]:
    _check_marking(net, m)
    if t not in net.transitions:
        raise FiringError(f"unknown transition {t!r}")
    ins = net.preset(t)
    if not ins or any(m.get(p, 0) < 1 for p in ins):
        raise FiringError(f"transition {t!r} is not enabled")
    out = {p: k for p, k in m.items() if k}
    for p in ins:
        out[p] -= 1
        if not out[p]:
            del out[p]
    for p in net.postset(t):
        out[p] = out.get(p, 0) + 1
    return out


def replay(net: PetriNet, transitions, m: Marking | None = None) -> dict[str, int]:
    """Fire ``transitions`` in order; raises :class:`FiringError` on the first disabled step."""
    marking = dict(net.initial_marking if m is None else m)
    for t in transitions:
        marking = fire(net, marking, t)
    return marking


def enumerate_complete_traces(net: PetriNet, max_len: int, max_states: int = DEFAULT_MAX_STATES) -> set[FiringSequence]:
    """Every firing sequence of at most ``max_len`` steps ending in the final marking.

    Completion is proper: the final places hold exactly their final tokens and
    every other place is empty.  Results for a (marking, remaining depth) pair
    are memoised.  More than ``max_states`` distinct markings raises
    :class:`StateBudgetExceeded` instead of silently truncating.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    places = sorted(net.places)
    index = {p: i for i, p in enumerate(places)}
    trans = sorted(net.transitions)
    pre = [tuple(index[p] for p in net.preset(t)) for t in trans]
    post = [tuple(index[p] for p in net.postset(t)) for t in trans]
    initial = tuple(net.initial_marking.get(p, 0) for p in places)
    final = tuple(net.final_marking.get(p, 0) for p in places)

    seen: set[tuple[int, ...]] = set()
    warned: set[int] = set()
    memo: dict[tuple[tuple[int, ...], int], frozenset[tuple[int, ...]]] = {}

    def visit(m):
        if m not in seen:
            seen.add(m)
            if len(seen) > max_states:
                raise StateBudgetExceeded(max_states)
            for i, k in enumerate(m):
                if k > CAPACITY_WARNING and i not in warned:
                    warned.add(i)
                    logger.warning("place %s holds %d tokens; the net may be unbounded", places[i], k)

    def suffixes(m, remaining):
        key = (m, remaining)
        hit = memo.get(key)
        if hit is not None:
            return hit
        visit(m)
        found = set()
        if m == final:
            found.add(())
        if remaining:
            for ti in range(len(trans)):
                ins = pre[ti]
                if not ins or any(m[i] < 1 for i in ins):
                    continue
                nxt = list(m)
                for i in ins:
                    nxt[i] -= 1
                for i in post[ti]:
                    nxt[i] += 1
                for rest in suffixes(tuple(nxt), remaining - 1):
                    found.add((ti,) + rest)
        result = frozenset(found)
        memo[key] = result
        return result

    final_items = tuple((p, k) for p, k in zip(places, final) if k)
    out = set()
    for seq in suffixes(initial, max_len):
        tids = tuple(trans[i] for i in seq)
        out.add(FiringSequence(tids, tuple(net.transitions[t] for t in tids), final_items))
    return out
