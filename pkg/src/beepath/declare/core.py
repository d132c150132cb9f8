"""DECLARE constraints as deterministic finite automata.

Each template is a small transition table over three symbol classes: the
first parameter, the second parameter, and everything else.  Symbols a
template does not mention loop in place, so one constraint automaton works
over any alphabet containing its parameters.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from enum import Enum
from typing import Iterable, Sequence

from ..model import END, INIT


class Template(str, Enum):
    INIT = "Init"
    EXACTLY_ONE = "ExactlyOne"
    CO_EXISTENCE = "CoExistence"
    NOT_CO_EXISTENCE = "NotCoExistence"
    SUCCESSION = "Succession"
    ALTERNATE_SUCCESSION = "AlternateSuccession"
    CHAIN_SUCCESSION = "ChainSuccession"
    NOT_CHAIN_SUCCESSION = "NotChainSuccession"
    ALTERNATE_PRECEDENCE = "AlternatePrecedence"
    ALTERNATE_RESPONSE = "AlternateResponse"

    def __str__(self) -> str:
        return self.value

    @property
    def arity(self) -> int:
        return 1 if self in (Template.INIT, Template.EXACTLY_ONE) else 2


@dataclass(frozen=True, order=True)
class ConstraintInstance:
    template: Template
    params: tuple[str, ...]

    def __post_init__(self):
        if len(self.params) != self.template.arity:
            raise ValueError(f"{self.template} takes {self.template.arity} parameter(s), got {self.params}")
        if len(set(self.params)) != len(self.params):
            raise ValueError(f"{self.template} needs distinct parameters, got {self.params}")

    def __str__(self) -> str:
        return f"{self.template}({', '.join(self.params)})"


def C(template: Template | str, *params: str) -> ConstraintInstance:
    return ConstraintInstance(Template(template), tuple(params))


@dataclass(frozen=True)
class DeclareSpec:
    """A set of constraints over an ordered alphabet.

    ``notes`` records interpretations made while translating; it does not
    take part in equality.
    """

    alphabet: tuple[str, ...]
    constraints: frozenset[ConstraintInstance]
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        known = set(self.alphabet)
        for c in self.constraints:
            missing = [x for x in c.params if x not in known]
            if missing:
                raise ValueError(f"{c} uses {', '.join(missing)} outside the alphabet")

    @property
    def references_init(self) -> bool:
        return any(INIT in c.params for c in self.constraints)

    @property
    def references_end(self) -> bool:
        return any(END in c.params for c in self.constraints)


@dataclass(frozen=True)
class DFA:
    """A total deterministic automaton over ``alphabet`` with states ``0..n-1``."""

    alphabet: tuple[str, ...]
    initial: int
    accepting: frozenset[int]
    delta: tuple[tuple[int, ...], ...]

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def step(self, state: int, symbol: str) -> int:
        return self.delta[state][self._index[symbol]]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    def run(self, trace: Iterable[str]) -> int:
        index = self._index
        state = self.initial
        for symbol in trace:
            try:
                state = self.delta[state][index[symbol]]
            except KeyError:
                raise ValueError(f"symbol {symbol!r} is not in the alphabet") from None
        return state

    def accepts(self, trace: Iterable[str]) -> bool:
        return self.run(trace) in self.accepting

    def live_states(self) -> set[int]:
        """States from which some accepting state is reachable."""
        back = [set() for _ in range(self.n_states)]
        for s, row in enumerate(self.delta):
            for d in row:
                back[d].add(s)
        live = set(self.accepting)
        queue = deque(live)
        while queue:
            for s in back[queue.popleft()]:
                if s not in live:
                    live.add(s)
                    queue.append(s)
        return live


# Transition tables: (n_states, accepting, {(state, cls): next}); cls is "a", "b"
# or "o"; a missing entry goes to the rejecting sink, except that "o" defaults
# to a self-loop.
_SINK = -1
_TABLES = {
    Template.INIT: (2, {1}, {(0, "a"): 1, (0, "o"): _SINK, (1, "a"): 1}),
    Template.EXACTLY_ONE: (2, {1}, {(0, "a"): 1}),
    Template.CO_EXISTENCE: (4, {0, 3}, {
        (0, "a"): 1, (0, "b"): 2, (1, "a"): 1, (1, "b"): 3,
        (2, "a"): 3, (2, "b"): 2, (3, "a"): 3, (3, "b"): 3}),
    Template.NOT_CO_EXISTENCE: (3, {0, 1, 2}, {
        (0, "a"): 1, (0, "b"): 2, (1, "a"): 1, (2, "b"): 2}),
    Template.SUCCESSION: (3, {0, 2}, {
        (0, "a"): 1, (1, "a"): 1, (1, "b"): 2, (2, "a"): 1, (2, "b"): 2}),
    Template.ALTERNATE_SUCCESSION: (2, {0}, {(0, "a"): 1, (1, "b"): 0}),
    Template.CHAIN_SUCCESSION: (2, {0}, {(0, "a"): 1, (1, "b"): 0, (1, "o"): _SINK}),
    Template.NOT_CHAIN_SUCCESSION: (2, {0, 1}, {
        (0, "a"): 1, (0, "b"): 0, (1, "a"): 1, (1, "o"): 0}),
    # AlternatePrecedence(x, y): every x needs a y since the previous x.
    Template.ALTERNATE_PRECEDENCE: (2, {0, 1}, {(0, "b"): 1, (1, "a"): 0, (1, "b"): 1}),
    # AlternateResponse(x, y): every x is answered by a y before the next x.
    Template.ALTERNATE_RESPONSE: (2, {0}, {(0, "a"): 1, (0, "b"): 0, (1, "b"): 0}),
}


def constraint_automaton(c: ConstraintInstance, alphabet: Sequence[str]) -> DFA:
    return _constraint_automaton(c, tuple(alphabet))


@lru_cache(maxsize=4096)
def _constraint_automaton(c: ConstraintInstance, alphabet: tuple[str, ...]) -> DFA:
    missing = [x for x in c.params if x not in alphabet]
    if missing:
        raise ValueError(f"{c} uses {', '.join(missing)} outside the alphabet")
    n, accepting, table = _TABLES[c.template]
    sink = n
    classes = []
    for symbol in alphabet:
        if symbol == c.params[0]:
            classes.append("a")
        elif len(c.params) > 1 and symbol == c.params[1]:
            classes.append("b")
        else:
            classes.append("o")
    rows = []
    for state in range(n):
        row = []
        for cls in classes:
            nxt = table.get((state, cls), state if cls == "o" else _SINK)
            row.append(sink if nxt == _SINK else nxt)
        rows.append(tuple(row))
    rows.append(tuple(sink for _ in alphabet))
    return DFA(alphabet, 0, frozenset(accepting), tuple(rows))


@dataclass(frozen=True)
class Verdict:
    violated: tuple[ConstraintInstance, ...]

    @property
    def satisfied(self) -> bool:
        return not self.violated

    def __bool__(self) -> bool:
        return self.satisfied


def check_trace(spec: DeclareSpec, trace: Sequence[str]) -> Verdict:
    """Run every constraint automaton on ``trace``."""
    unknown = [x for x in trace if x not in spec.alphabet]
    if unknown:
        raise ValueError(f"trace uses label(s) outside the alphabet: {', '.join(dict.fromkeys(unknown))}")
    violated = [c for c in sorted(spec.constraints)
                if not constraint_automaton(c, spec.alphabet).accepts(trace)]
    return Verdict(tuple(violated))


def product(automata: Sequence[DFA], alphabet: Sequence[str]) -> DFA:
    """Synchronous product restricted to reachable states.

    Tuples in which some component can no longer accept are merged into a
    single rejecting sink, which keeps the construction small.
    """
    alphabet = tuple(alphabet)
    for a in automata:
        if a.alphabet != alphabet:
            raise ValueError("product operands must share one alphabet")
    live = [a.live_states() for a in automata]
    sink = None

    def dead(state) -> bool:
        return any(x not in lv for x, lv in zip(state, live))

    start = tuple(a.initial for a in automata)
    start = sink if dead(start) else start
    ids = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        state = order[i]
        row = []
        for k in range(len(alphabet)):
            if state is sink:
                nxt = sink
            else:
                nxt = tuple(a.delta[s][k] for a, s in zip(automata, state))
                if dead(nxt):
                    nxt = sink
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            row.append(ids[nxt])
        rows.append(tuple(row))
        i += 1
    accepting = frozenset(ids[s] for s in order if s is not sink
                          and all(x in a.accepting for a, x in zip(automata, s)))
    return DFA(alphabet, 0, accepting, tuple(rows))


def minimize(dfa: DFA) -> DFA:
    """Moore partition refinement, then canonical breadth-first renumbering."""
    n = dfa.n_states
    block = [1 if s in dfa.accepting else 0 for s in range(n)]
    while True:
        signature = {}
        new_block = []
        for s in range(n):
            key = (block[s], tuple(block[d] for d in dfa.delta[s]))
            new_block.append(signature.setdefault(key, len(signature)))
        if len(signature) == len(set(block)):
            break
        block = new_block
    # representative automaton over blocks
    reps = {}
    for s in range(n):
        reps.setdefault(block[s], s)
    ids = {block[dfa.initial]: 0}
    order = [block[dfa.initial]]
    rows = []
    i = 0
    while i < len(order):
        s = reps[order[i]]
        row = []
        for d in dfa.delta[s]:
            b = block[d]
            if b not in ids:
                ids[b] = len(order)
                order.append(b)
            row.append(ids[b])
        rows.append(tuple(row))
        i += 1
    accepting = frozenset(ids[b] for b in order if reps[b] in dfa.accepting)
    return DFA(dfa.alphabet, 0, accepting, tuple(rows))


def universal(alphabet: Sequence[str]) -> DFA:
    alphabet = tuple(alphabet)
    return DFA(alphabet, 0, frozenset({0}), (tuple(0 for _ in alphabet),))


def spec_automaton(spec: DeclareSpec) -> DFA:
    """Minimal automaton accepting exactly the traces that satisfy every constraint."""
    if not spec.alphabet:
        raise ValueError("the alphabet is empty")
    if not spec.constraints:
        return universal(spec.alphabet)
    # Fold constraints one at a time, minimizing as we go.  Taking next the
    # constraint that shares most activities with those already folded keeps
    # unrelated parts from multiplying the intermediate state count.
    pending = sorted(spec.constraints)
    seen: set[str] = set()
    acc = None
    while pending:
        c = max(pending, key=lambda c: (len(seen.intersection(c.params)), -pending.index(c)))
        pending.remove(c)
        seen.update(c.params)
        a = constraint_automaton(c, spec.alphabet)
        acc = minimize(a if acc is None else product([acc, a], spec.alphabet))
    return acc


def boundary_automaton(alphabet: Sequence[str], init: bool, end: bool) -> DFA:
    """Traces where the artificial events occur once each, init first and end last."""
    alphabet = tuple(alphabet)
    # states: 0 before init, 1 running, 2 after end, 3 sink
    sink = 3
    rows = []
    for state in range(4):
        row = []
        for symbol in alphabet:
            if state in (2, sink):
                row.append(sink)
            elif init and symbol == INIT:
                row.append(1 if state == 0 else sink)
            elif end and symbol == END:
                row.append(2 if state == 1 else sink)
            else:
                row.append(1 if state in (0, 1) and not (init and state == 0) else sink)
        rows.append(tuple(row))
    if not init:
        rows[0] = rows[1]
    accepting = {2} if end else {1} | ({0} if not init else set())
    return DFA(alphabet, 0, frozenset(accepting), tuple(rows))


def well_formed_automaton(spec: DeclareSpec) -> DFA:
    """``spec_automaton`` restricted to traces with properly placed artificial events."""
    base = spec_automaton(spec)
    if not (spec.references_init or spec.references_end):
        return base
    shape = boundary_automaton(spec.alphabet, spec.references_init, spec.references_end)
    return minimize(product([base, shape], spec.alphabet))


def trim(dfa: DFA) -> dict[int, dict[str, int]]:
    """Reachable, co-reachable part as a partial transition map (drops the sink)."""
    live = dfa.live_states()
    out: dict[int, dict[str, int]] = {}
    if dfa.initial not in live:
        return out
    queue = deque([dfa.initial])
    out[dfa.initial] = {}
    while queue:
        s = queue.popleft()
        for symbol, d in zip(dfa.alphabet, dfa.delta[s]):
            if d in live:
                out[s][symbol] = d
                if d not in out:
                    out[d] = {}
                    queue.append(d)
    return out


def isomorphic(dfa: DFA, states: dict, initial, accepting: set) -> bool:
    """Compare the trimmed ``dfa`` with a drawn partial automaton.

    ``states`` maps each drawn state to ``{symbol: target}``; the drawing is
    assumed deterministic.
    """
    mine = trim(dfa)
    if len(mine) != len(states):
        return False
    mapping = {dfa.initial: initial}
    queue = deque([dfa.initial])
    while queue:
        s = queue.popleft()
        t = mapping[s]
        if (s in dfa.accepting) != (t in accepting):
            return False
        if set(mine[s]) != set(states[t]):
            return False
        for symbol, d in mine[s].items():
            e = states[t][symbol]
            if d in mapping:
                if mapping[d] != e:
                    return False
            else:
                if e in mapping.values():
                    return False
                mapping[d] = e
                queue.append(d)
    return len(mapping) == len(states)
