"""Text serializations of nets, DECLARE specifications, automata and ASTs.

Every writer is deterministic and has a matching reader, so that output can
be checked by reading it back.
"""

from __future__ import annotations

import json
import re

from .declare.core import DFA, ConstraintInstance, DeclareSpec, Template, trim
from .frontend.ast import ActRef, Closing, Description, Fragment, Variant
from .model import END, INIT
from .petri.net import PetriNet

SILENT_LABEL = "$invisible$"

DECL_NAMES = {
    Template.INIT: "Init",
    Template.EXACTLY_ONE: "Exactly1",
    Template.CO_EXISTENCE: "Co-Existence",
    Template.NOT_CO_EXISTENCE: "Not Co-Existence",
    Template.SUCCESSION: "Succession",
    Template.ALTERNATE_SUCCESSION: "Alternate Succession",
    Template.CHAIN_SUCCESSION: "Chain Succession",
    Template.NOT_CHAIN_SUCCESSION: "Not Chain Succession",
    Template.ALTERNATE_PRECEDENCE: "Alternate Precedence",
    Template.ALTERNATE_RESPONSE: "Alternate Response",
}
_DECL_TEMPLATES = {v: k for k, v in DECL_NAMES.items()}

_DISPLAY = {INIT: "init", END: "end"}
_INTERNAL = {v: k for k, v in _DISPLAY.items()}


def display_label(label: str) -> str:
    """Outward name of an activity; the artificial events print as init/end."""
    return _DISPLAY.get(label, label)


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


# --- DOT ---------------------------------------------------------------------

def emit_dot_petri(net: PetriNet, name: str = "net") -> str:
    lines = [f"digraph {_q(name)} {{", '  rankdir="LR";']
    for p in net.places:
        lines.append(f'  {_q(p)} [shape="circle",label=""];')
    for t, label in net.transitions.items():
        if label is None:
            lines.append(f'  {_q(t)} [shape="box",label="",height=".3",width=".1",style="filled",fillcolor="black"];')
        elif label == t:
            lines.append(f'  {_q(t)} [shape="box"];')
        else:
            lines.append(f'  {_q(t)} [shape="box",label={_q(label)}];')
    for src, dst in sorted(net.arcs):
        lines.append(f"  {_q(src)} -> {_q(dst)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dot_automaton(dfa: DFA, name: str = "automaton") -> str:
    """Draw the trimmed automaton, parallel edges merged into one label."""
    states = trim(dfa)
    lines = [f"digraph {_q(name)} {{", '  rankdir="LR";',
             '  start [label="",style="invisible",width=0,height=0];']
    for s in sorted(states):
        extra = ",peripheries=2" if s in dfa.accepting else ""
        lines.append(f'  "q{s}" [shape="circle",label=""{extra}];')
    if states:
        lines.append(f'  start -> "q{dfa.initial}";')
    for s in sorted(states):
        grouped: dict[int, list[str]] = {}
        for symbol, d in states[s].items():
            grouped.setdefault(d, []).append(display_label(symbol))
        for d in sorted(grouped):
            lines.append(f'  "q{s}" -> "q{d}" [label={_q(" ".join(grouped[d]))}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- TPN ---------------------------------------------------------------------

def emit_tpn(net: PetriNet) -> str:
    pre: dict[str, list[str]] = {t: [] for t in net.transitions}
    post: dict[str, list[str]] = {t: [] for t in net.transitions}
    for src, dst in net.arcs:
        if dst in pre:
            pre[dst].append(src)
        else:
            post[src].append(dst)
    lines = []
    for p in sorted(net.places):
        tokens = net.initial_marking.get(p, 0)
        lines.append(f"place {_q(p)} init {tokens};" if tokens else f"place {_q(p)};")
    for t in sorted(net.transitions):
        label = net.transitions[t]
        ins = " ".join(_q(p) for p in sorted(pre[t]))
        outs = " ".join(_q(p) for p in sorted(post[t]))
        line = f"trans {_q(t)}~{_q(SILENT_LABEL if label is None else label)}"
        if ins:
            line += f" in {ins}"
        if outs:
            line += f" out {outs}"
        lines.append(line + ";")
    return "\n".join(lines) + "\n" if lines else ""


_STRING = r'"((?:[^"\\]|\\.)*)"'
_PLACE_RE = re.compile(rf"^place {_STRING}(?: init (\d+))?;$")
_ANY_STRING = r'"(?:[^"\\]|\\.)*"'
_TRANS_RE = re.compile(rf"^trans {_STRING}~{_STRING}((?: in(?: {_ANY_STRING})+)?)((?: out(?: {_ANY_STRING})+)?);$")


def _unq(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text)


def _strings(fragment: str) -> list[str]:
    return [_unq(s) for s in re.findall(_STRING, fragment)]


def read_tpn(text: str) -> PetriNet:
    """Inverse of :func:`emit_tpn`; the final marking is not part of the format."""
    net = PetriNet()
    transitions = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if m := _PLACE_RE.match(line):
            p = net.add_place(_unq(m.group(1)))
            if m.group(2):
                net.initial_marking[p] = int(m.group(2))
        elif m := _TRANS_RE.match(line):
            transitions.append(m)
        else:
            raise ValueError(f"line {number}: not a TPN place or transition: {line!r}")
    for m in transitions:
        t = _unq(m.group(1))
        label = _unq(m.group(2))
        net.add_transition(t, None if label == SILENT_LABEL else label)
        for p in _strings(m.group(3)):
            net.add_arc(p, t)
        for p in _strings(m.group(4)):
            net.add_arc(t, p)
    return net


# --- DECL --------------------------------------------------------------------

def _decl_line(c: ConstraintInstance) -> str:
    return f"{DECL_NAMES[c.template]}[{', '.join(display_label(x) for x in c.params)}] | | |"


def emit_decl(spec: DeclareSpec) -> str:
    lines = [f"activity {display_label(a)}" for a in spec.alphabet]
    lines += sorted(_decl_line(c) for c in spec.constraints)
    return "\n".join(lines) + "\n" if lines else ""


_DECL_RE = re.compile(r"^([A-Za-z1 -]+)\[([^\]]*)\] \| \| \|$")


def read_decl(text: str) -> DeclareSpec:
    alphabet = []
    constraints = set()
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("activity "):
            alphabet.append(_INTERNAL.get(line[len("activity "):], line[len("activity "):]))
            continue
        m = _DECL_RE.match(line)
        if not m or m.group(1) not in _DECL_TEMPLATES:
            raise ValueError(f"line {number}: not a DECL activity or constraint: {line!r}")
        params = tuple(_INTERNAL.get(x.strip(), x.strip()) for x in m.group(2).split(","))
        constraints.add(ConstraintInstance(_DECL_TEMPLATES[m.group(1)], params))
    return DeclareSpec(tuple(alphabet), frozenset(constraints))


# --- JSON --------------------------------------------------------------------

def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _ref_to_json(ref: ActRef) -> str:
    return f"({ref.name})" if ref.subprocess else ref.name


def _ref_from_json(text: str) -> ActRef:
    if text.startswith("(") and text.endswith(")"):
        return ActRef(text[1:-1], subprocess=True)
    return ActRef(text)


def ast_to_dict(d: Description) -> dict:
    assert d.fragments, "a description always has at least one fragment"
    fragments = []
    for f in d.fragments:
        obj = {"variant": f.variant.value, "args": [_ref_to_json(a) for a in f.args]}
        if f.subprocess_id is not None:
            obj["subprocess_id"] = f.subprocess_id
        fragments.append(obj)
    return {
        "leading_text": d.leading_text,
        "initial": d.initial,
        "fragments": fragments,
        "closing": {"mode": d.closing.mode, "args": [_ref_to_json(a) for a in d.closing.args]},
    }


def emit_json_ast(d: Description) -> str:
    return _dump(ast_to_dict(d))


def ast_from_json(text: str) -> Description:
    doc = json.loads(text)
    fragments = tuple(
        Fragment(Variant(f["variant"]), tuple(_ref_from_json(a) for a in f["args"]), f.get("subprocess_id"))
        for f in doc["fragments"]
    )
    closing = Closing(doc["closing"]["mode"], tuple(_ref_from_json(a) for a in doc["closing"]["args"]))
    return Description(doc["leading_text"], doc["initial"], fragments, closing)


def emit_json_petri(net: PetriNet) -> str:
    return _dump({
        "places": list(net.places),
        "transitions": [{"id": t, "label": label} for t, label in net.transitions.items()],
        "arcs": [list(a) for a in sorted(net.arcs)],
        "initial_marking": net.initial_marking,
        "final_marking": net.final_marking,
        "provenance": net.provenance,
    })


def petri_from_json(text: str) -> PetriNet:
    doc = json.loads(text)
    net = PetriNet()
    for p in doc["places"]:
        net.add_place(p)
    for t in doc["transitions"]:
        net.add_transition(t["id"], t["label"])
    for src, dst in doc["arcs"]:
        net.add_arc(src, dst)
    net.initial_marking.update(doc["initial_marking"])
    net.final_marking.update(doc["final_marking"])
    net.provenance.update(doc.get("provenance", {}))
    return net


def emit_json_declare(spec: DeclareSpec) -> str:
    return _dump({
        "alphabet": [display_label(a) for a in spec.alphabet],
        "constraints": [
            {"template": c.template.value, "params": [display_label(x) for x in c.params]}
            for c in sorted(spec.constraints)
        ],
        "notes": list(spec.notes),
    })


def declare_from_json(text: str) -> DeclareSpec:
    doc = json.loads(text)
    internal = lambda x: _INTERNAL.get(x, x)  # noqa: E731
    constraints = frozenset(
        ConstraintInstance(Template(c["template"]), tuple(internal(x) for x in c["params"]))
        for c in doc["constraints"]
    )
    return DeclareSpec(tuple(internal(a) for a in doc["alphabet"]), constraints, tuple(doc.get("notes", ())))
