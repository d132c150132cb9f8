"""Fragment gadgets and their label-based composition into one net.

Every activity ``A`` is a gadget ``A_start -> [A] -> A_end``.  A fragment adds
places (and occasionally silent transitions) between the gadgets it mentions;
composing fragments fuses transitions carrying the same label, and therefore
also the activity places, since those are identified by activity name.

Nodes are addressed by structured keys while building:

* ``("act", name)`` is the internal place of an activity gadget;
* ``("f", index, tag)`` is a place local to fragment ``index``;
* ``("open", index, tag)`` is a dangling boundary place kept only so that a
  standalone gadget looks like its drawing; composition drops it;
* ``("pre", name)`` stands for "whatever place enables ``name_start``" and is
  resolved during composition (repeat targets);
* ``("tau", owner, n)`` is a silent transition;
* a labelled transition is keyed by its label.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..frontend.ast import (
    CHOICE_VARIANTS,
    JOIN_VARIANTS,
    MERGE_VARIANTS,
    PAIR_VARIANTS,
    SPLIT_VARIANTS,
    ActRef,
    Variant,
)
from ..model import FragmentInstance, ProcessSpec, Subprocess
from .net import PetriNet


def start(name: str) -> str:
    return f"{name}_start"


def end(name: str) -> str:
    return f"{name}_end"


def _key_name(key) -> str:
    if isinstance(key, str):
        return key
    kind = key[0]
    if kind == "act":
        return f"[{key[1]}]"
    if kind == "pre":
        return f"pre({key[1]})"
    return ".".join(str(k) for k in key)


class _Builder:
    def __init__(self, owner):
        self.owner = owner
        self.places: dict = {}
        self.transitions: dict = {}
        self.arcs: dict = {}
        self.origins: dict = {}
        self._taus = 0
        self._tags = 0

    def place(self, key, origin: str = ""):
        self.places.setdefault(key, origin)
        return key

    def local(self, tag: str, origin: str = ""):
        self._tags += 1
        return self.place(("f", self.owner, f"{tag}{self._tags}"), origin)

    def labeled(self, label: str):
        self.transitions.setdefault(label, label)
        return label

    def silent(self, tag: str, origin: str = ""):
        self._taus += 1
        key = ("tau", self.owner, f"{tag}{self._taus}")
        self.transitions[key] = None
        self.origins[key] = origin
        return key

    def arc(self, src, dst) -> None:
        self.arcs[(src, dst)] = None

    def activity_place(self, name: str):
        return self.place(("act", name), f"activity {name}")

    def gadget(self, name: str) -> None:
        p = self.activity_place(name)
        self.arc(self.labeled(start(name)), p)
        self.arc(p, self.labeled(end(name)))

    # -- branch helpers shared by fragments, openings and closings --

    def branch_in(self, place, ref: ActRef, subs: dict[str, Subprocess], why: str) -> None:
        """Let ``place`` start ``ref``: directly, via a silent AND-split, or as an OR-choice."""
        if not ref.subprocess:
            self.arc(place, self.labeled(start(ref.name)))
            self.arc(start(ref.name), self.activity_place(ref.name))
            return
        sp = _lookup(subs, ref)
        if sp.kind == "AND":
            tau = self.silent("split", f"{why}: AND-split into ({sp.name})")
            self.arc(place, tau)
            for m in sp.members:
                q = self.local("split", f"{why}: branch of ({sp.name}) toward {m}")
                self.arc(tau, q)
                self.arc(q, self.labeled(start(m)))
                self.arc(start(m), self.activity_place(m))
        else:
            for m in sp.members:
                self.arc(place, self.labeled(start(m)))
                self.arc(start(m), self.activity_place(m))

    def branch_out(self, ref: ActRef, place, subs: dict[str, Subprocess], why: str) -> None:
        """Route the completion of ``ref`` into ``place``."""
        if not ref.subprocess:
            self.arc(self.activity_place(ref.name), self.labeled(end(ref.name)))
            self.arc(end(ref.name), place)
            return
        sp = _lookup(subs, ref)
        if sp.kind == "AND":
            tau = self.silent("join", f"{why}: AND-join of ({sp.name})")
            for m in sp.members:
                q = self.local("join", f"{why}: completion of {m} in ({sp.name})")
                self.arc(self.activity_place(m), self.labeled(end(m)))
                self.arc(end(m), q)
                self.arc(q, tau)
            self.arc(tau, place)
        else:
            for m in sp.members:
                self.arc(self.activity_place(m), self.labeled(end(m)))
                self.arc(end(m), place)


def _lookup(subs: dict[str, Subprocess], ref: ActRef) -> Subprocess:
    try:
        return subs[ref.name]
    except KeyError:
        raise ValueError(f"unresolved subprocess ({ref.name})") from None


@dataclass
class NetFragment:
    """The net piece contributed by one fragment instance."""

    index: int
    variant: Variant
    places: dict = field(default_factory=dict)
    transitions: dict = field(default_factory=dict)
    arcs: list = field(default_factory=list)
    origins: dict = field(default_factory=dict)

    @property
    def silent(self) -> list:
        return [t for t, label in self.transitions.items() if label is None]

    def as_net(self) -> PetriNet:
        """The gadget as a standalone drawing (dangling places included)."""
        net = PetriNet()
        for key in self.places:
            net.add_place(_key_name(key))
        for key, label in self.transitions.items():
            net.add_transition(_key_name(key), label)
        for s, d in self.arcs:
            net.add_arc(_key_name(s), _key_name(d))
        return net


def translate_fragment_pn(f: FragmentInstance, subprocesses: dict[str, Subprocess]) -> NetFragment:
    b = _Builder(f.index)
    why = f"{f.variant} at statement {f.index + 1}"
    v, a = f.variant, f.args

    if v in PAIR_VARIANTS:
        src, tgt = a[0].name, a[1].name
        b.arc(b.place(("open", f.index, "in"), why), b.labeled(start(src)))
        b.gadget(src)
        link = b.local("link", why)
        b.arc(end(src), link)
        b.arc(link, b.labeled(start(tgt)))
        b.gadget(tgt)
        b.arc(end(tgt), b.place(("open", f.index, "out"), why))
    elif v in SPLIT_VARIANTS:
        src = a[0].name
        b.arc(b.activity_place(src), b.labeled(end(src)))
        for ref in a[1:]:
            p = b.local("branch", f"{why}: branch {ref}")
            b.arc(end(src), p)
            b.branch_in(p, ref, subprocesses, why)
    elif v in CHOICE_VARIANTS:
        src = a[0].name
        b.arc(b.activity_place(src), b.labeled(end(src)))
        choice = b.local("choice", why)
        b.arc(end(src), choice)
        for ref in a[1:]:
            b.branch_in(choice, ref, subprocesses, why)
    elif v in JOIN_VARIANTS:
        tgt = a[-1]
        for ref in a[:-1]:
            p = b.local("branch", f"{why}: branch {ref}")
            b.branch_out(ref, p, subprocesses, why)
            b.branch_in(p, tgt, subprocesses, why)
    elif v in MERGE_VARIANTS:
        merge = b.local("merge", why)
        for ref in a[:-1]:
            b.branch_out(ref, merge, subprocesses, why)
        b.branch_in(merge, a[-1], subprocesses, why)
    elif v is Variant.REPEAT_SINCE:
        src, again = a[0].name, a[1].name
        b.arc(b.activity_place(src), b.labeled(end(src)))
        decision = b.local("decision", why)
        b.arc(end(src), decision)
        for ref in a[2:]:
            b.branch_in(decision, ref, subprocesses, why)
        tau = b.silent("repeat", f"{why}: repeat since {again}")
        pre = b.place(("pre", again), f"{why}: place enabling {again}")
        b.arc(decision, tau)
        b.arc(tau, pre)
        b.arc(pre, b.labeled(start(again)))
        b.arc(start(again), b.activity_place(again))
    else:
        raise ValueError(f"{v} declares a subprocess and has no net of its own")

    return NetFragment(f.index, v, dict(b.places), dict(b.transitions), list(b.arcs), b.origins)


def _absorb(b: _Builder, nf: NetFragment) -> list:
    """Copy ``nf`` into ``b`` minus dangling places; return deferred repeat arcs."""
    deferred = []
    for key, origin in nf.places.items():
        if key[0] in ("open", "pre"):
            continue
        b.place(key, origin)
    for key, label in nf.transitions.items():
        if label is None:
            b.transitions[key] = None
            b.origins[key] = nf.origins.get(key, "")
        else:
            b.labeled(label)
    for s, d in nf.arcs:
        if (not isinstance(s, str) and s[0] == "open") or (not isinstance(d, str) and d[0] == "open"):
            continue
        if (not isinstance(s, str) and s[0] == "pre") or (not isinstance(d, str) and d[0] == "pre"):
            deferred.append((s, d))
            continue
        b.arc(s, d)
    return deferred


def _resolve_repeats(b: _Builder, deferred: list) -> None:
    """Point each repeat back-arc at the places that already enable the target's start."""
    targets: dict = {}
    for s, d in deferred:
        pre = d if isinstance(d, tuple) and d[0] == "pre" else s
        targets.setdefault(pre, []).append((s, d))
    for pre, arcs in targets.items():
        name = pre[1]
        enabling = [s for (s, d) in b.arcs if d == start(name)]
        if not enabling:
            b.place(pre, f"place enabling {name} (only reachable by repetition)")
            for s, d in arcs:
                b.arc(s, d)
            continue
        for s, d in arcs:
            if d == pre:
                for p in enabling:
                    b.arc(s, p)


def _close(b: _Builder, mode: str, refs, subs, sink, why: str) -> None:
    if mode == "conjunctive":
        tau = b.silent("close", f"{why}: all branches finished")
        for ref in refs:
            q = b.local("done", f"{why}: {ref} finished")
            b.branch_out(ref, q, subs, why)
            b.arc(q, tau)
        b.arc(tau, sink)
    else:
        for ref in refs:
            b.branch_out(ref, sink, subs, why)


def _open(b: _Builder, mode: str, refs, subs, why: str) -> list:
    """Initially marked places starting ``refs`` together or alternatively."""
    if mode == "conjunctive":
        marked = []
        for ref in refs:
            p = b.local("source", f"{why}: start {ref}")
            b.branch_in(p, ref, subs, why)
            marked.append(p)
        return marked
    p = b.local("source", f"{why}: start one of the alternatives")
    for ref in refs:
        b.branch_in(p, ref, subs, why)
    return [p]


def _finish(b: _Builder, marked: list, sink) -> PetriNet:
    """Renumber places p0.. and silent transitions tau0.. in creation order."""
    names = {}
    for i, key in enumerate(b.places):
        names[key] = f"p{i}"
    n = 0
    for key, label in b.transitions.items():
        if label is None:
            names[key] = f"tau{n}"
            n += 1
        else:
            names[key] = key
    net = PetriNet()
    for key, origin in b.places.items():
        net.add_place(names[key], origin or _key_name(key))
    for key, label in b.transitions.items():
        net.add_transition(names[key], label, b.origins.get(key) if label is None else None)
    for s, d in b.arcs:
        net.add_arc(names[s], names[d])
    for p in marked:
        net.initial_marking[names[p]] = net.initial_marking.get(names[p], 0) + 1
    net.final_marking = {names[sink]: 1}
    return net


def translate_spec_pn(p: ProcessSpec) -> PetriNet:
    """Compose the gadgets of every fragment into the net of the whole process."""
    b = _Builder("spec")
    source = b.place(("source",), "source: initial token")
    for name in p.registry:
        b.gadget(name)
    b.arc(source, start(p.initial))

    deferred = []
    for f in p.fragments:
        deferred += _absorb(b, translate_fragment_pn(f, p.subprocesses))
    _resolve_repeats(b, deferred)

    b.owner = "close"
    sink = ("sink",)
    mode = p.closing.mode
    if mode == "single" and len(p.closing.args) > 1:
        mode = "conjunctive"
    _close(b, mode, p.closing.args, p.subprocesses, sink, "closing statement")
    # keep the sink as the last place
    b.places.pop(sink, None)
    b.place(sink, "sink: process finished")
    return _finish(b, [source], sink)


def fragment_net(f: FragmentInstance, subprocesses: dict[str, Subprocess]) -> PetriNet:
    """A closed, runnable net for a single fragment.

    Sources get initially marked places (shared when the fragment merges
    alternatives), and targets drain into one sink (through a silent join
    when the fragment starts them in parallel).
    """
    v, a = f.variant, f.args
    if v in JOIN_VARIANTS:
        opening, sources, closing, targets = "conjunctive", a[:-1], "single", a[-1:]
    elif v in MERGE_VARIANTS:
        opening, sources, closing, targets = "disjunctive", a[:-1], "single", a[-1:]
    elif v in SPLIT_VARIANTS:
        opening, sources, closing, targets = "conjunctive", a[:1], "conjunctive", a[1:]
    elif v in CHOICE_VARIANTS:
        opening, sources, closing, targets = "conjunctive", a[:1], "disjunctive", a[1:]
    elif v is Variant.REPEAT_SINCE:
        opening, sources, closing, targets = "conjunctive", a[:1], "disjunctive", a[2:]
    else:
        opening, sources, closing, targets = "conjunctive", a[:1], "single", a[1:]

    b = _Builder("open")
    marked = _open(b, opening, sources, subprocesses, "standalone opening")
    deferred = _absorb(b, translate_fragment_pn(f, subprocesses))
    _resolve_repeats(b, deferred)
    b.owner = "close"
    sink = ("sink",)
    _close(b, closing, targets, subprocesses, sink, "standalone closing")
    b.places.pop(sink, None)
    b.place(sink, "sink")
    return _finish(b, marked, sink)
