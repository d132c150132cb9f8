import re

import pytest
from hypothesis import given, settings

from beepath.declare import C, DeclareSpec, Template, fragment_spec, translate_spec_decl, well_formed_automaton
from beepath.emitters import (
    ast_from_json,
    declare_from_json,
    emit_decl,
    emit_dot_automaton,
    emit_dot_petri,
    emit_json_ast,
    emit_json_declare,
    emit_json_petri,
    emit_tpn,
    petri_from_json,
    read_decl,
    read_tpn,
)
from beepath.frontend import parse_text
from beepath.model import analyze
from beepath.petri import PetriNet, fragment_net, translate_fragment_pn, translate_spec_pn

from .conftest import GOLDEN, SUBPROCESSES, flow_instance, program
from .strategies import descriptions
from .test_petri import isomorphic

_DOT_TOKEN = re.compile(r'\s*(?:(->)|([{}\[\];,=])|("(?:[^"\\]|\\.)*")|([A-Za-z_][A-Za-z0-9_]*|-?\.?[0-9][0-9.]*))')


def dot_tokens(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _DOT_TOKEN.match(text, pos)
        assert m, f"bad DOT at offset {pos}: {text[pos:pos + 20]!r}"
        tokens.append(m.group(m.lastindex))
        pos = m.end()
    return tokens


def check_dot(text: str) -> dict:
    """Parse the subset of DOT the emitters use; return node attributes by id."""
    toks = dot_tokens(text)
    nodes: dict[str, dict] = {}
    edges = []
    i = 0

    def take(expected=None):
        nonlocal i
        tok = toks[i]
        if expected is not None:
            assert tok == expected, f"expected {expected!r}, got {tok!r}"
        i += 1
        return tok

    def ident():
        tok = take()
        assert tok not in "{}[];,=" and tok != "->", tok
        return tok.strip('"')

    def attrs():
        out = {}
        if toks[i] == "[":
            take("[")
            while toks[i] != "]":
                key = ident()
                take("=")
                out[key] = ident()
                if toks[i] == ",":
                    take(",")
            take("]")
        return out

    take("digraph")
    if toks[i] != "{":
        ident()
    take("{")
    while toks[i] != "}":
        first = ident()
        if toks[i] == "=":
            take("=")
            ident()
        elif toks[i] == "->":
            take("->")
            edges.append((first, ident()))
            attrs()
        else:
            nodes[first] = attrs()
        take(";")
    take("}")
    assert i == len(toks)
    for a, b in edges:
        assert a in nodes and b in nodes, (a, b)
    return nodes


def hospital_models(spec):
    return translate_spec_pn(spec), translate_spec_decl(spec)


class TestDot:
    def test_sequence_gadget(self):
        net = translate_fragment_pn(flow_instance("Sequence"), SUBPROCESSES).as_net()
        text = emit_dot_petri(net)
        assert '"A_end" [shape="box"];' in text
        nodes = check_dot(text)
        assert sum(a.get("shape") == "circle" for a in nodes.values()) == 5
        assert 'rankdir="LR"' in text

    def test_empty_net(self):
        assert check_dot(emit_dot_petri(PetriNet())) == {}

    def test_repeat_since_has_one_black_box(self):
        text = emit_dot_petri(fragment_net(flow_instance("RepeatSince"), SUBPROCESSES))
        check_dot(text)
        assert text.count('style="filled",fillcolor="black"') == 1

    def test_places_have_empty_labels(self, hospital_spec):
        nodes = check_dot(emit_dot_petri(translate_spec_pn(hospital_spec)))
        places = [a for a in nodes.values() if a.get("shape") == "circle"]
        assert len(places) == 37 and all(a["label"] == "" for a in places)

    def test_automaton(self):
        dfa = well_formed_automaton(fragment_spec(flow_instance("ExclusiveChoice"), SUBPROCESSES))
        text = emit_dot_automaton(dfa)
        nodes = check_dot(text)
        assert len(nodes) == 5  # four states plus the invisible start marker
        assert '[label="B C"]' in text and '[label="end"]' in text

    def test_golden(self, hospital_spec):
        assert emit_dot_petri(translate_spec_pn(hospital_spec)) == (GOLDEN / "hospital.petri.dot").read_text()


class TestTpn:
    def test_marked_source(self):
        p = analyze(parse_text(program('After "A" ends, immediately start "B".')))
        text = emit_tpn(translate_spec_pn(p))
        assert 'place "p0" init 1;' in text.splitlines()
        assert text.endswith(";\n") and "\r" not in text

    def test_silent_line(self):
        text = emit_tpn(fragment_net(flow_instance("RepeatSince"), SUBPROCESSES))
        assert text.count('~"$invisible$"') == 1

    def test_ordering(self, hospital_spec):
        lines = emit_tpn(translate_spec_pn(hospital_spec)).splitlines()
        places = [l for l in lines if l.startswith("place ")]
        trans = [l for l in lines if l.startswith("trans ")]
        assert lines == places + trans
        assert places == sorted(places, key=lambda l: l.split('"')[1])
        assert trans == sorted(trans, key=lambda l: l.split('"')[1])
        assert sum('~"$invisible$"' not in l for l in trans) == 34

    def test_round_trip(self, hospital_spec):
        net = translate_spec_pn(hospital_spec)
        back = read_tpn(emit_tpn(net))
        back.final_marking.update(net.final_marking)
        assert isomorphic(back, net)
        assert back.transitions == net.transitions and back.arcs == net.arcs

    def test_reader_rejects_garbage(self):
        with pytest.raises(ValueError):
            read_tpn("place p0;\n")

    def test_golden(self, hospital_spec):
        assert emit_tpn(translate_spec_pn(hospital_spec)) == (GOLDEN / "hospital.tpn").read_text()


class TestDecl:
    def test_chain_succession(self):
        spec = DeclareSpec(("A", "B"), frozenset({C(Template.CHAIN_SUCCESSION, "A", "B")}))
        assert emit_decl(spec) == "activity A\nactivity B\nChain Succession[A, B] | | |\n"

    def test_empty_spec(self):
        assert emit_decl(DeclareSpec(("A",), frozenset())) == "activity A\n"

    def test_template_spellings(self):
        spec = fragment_spec(flow_instance("SimpleMerge"), SUBPROCESSES)
        text = emit_decl(spec)
        for name in ("Exactly1[F]", "Init[init]", "Not Co-Existence[D, E]", "Not Chain Succession[init, F]",
                     "Alternate Response[D, F]"):
            assert name in text
        body = [l for l in text.splitlines() if not l.startswith("activity ")]
        assert body == sorted(body)

    def test_round_trip(self, hospital_spec):
        spec = translate_spec_decl(hospital_spec)
        assert read_decl(emit_decl(spec)) == spec

    def test_golden(self, hospital_spec):
        assert emit_decl(translate_spec_decl(hospital_spec)) == (GOLDEN / "hospital.decl").read_text()


class TestJson:
    def test_sequence_fragment_schema(self):
        text = emit_json_ast(parse_text(program('After "A" ends, immediately start "B".')))
        compact = re.sub(r"\s+", "", text)
        assert '"args":["A","B"],"variant":"Sequence"' in compact

    def test_hospital_ast(self, hospital_description):
        text = emit_json_ast(hospital_description)
        assert text.count('"variant"') == 14
        assert ast_from_json(text) == hospital_description
        assert text == (GOLDEN / "hospital.ast.json").read_text()

    def test_net_and_declare_round_trip(self, hospital_spec):
        net, spec = hospital_models(hospital_spec)
        assert petri_from_json(emit_json_petri(net)) == net
        assert declare_from_json(emit_json_declare(spec)) == spec


def test_outputs_are_byte_stable(hospital_text):
    def run():
        d = parse_text(hospital_text)
        net, spec = hospital_models(analyze(d))
        return [emit_tpn(net), emit_decl(spec), emit_json_ast(d), emit_dot_petri(net),
                emit_json_petri(net), emit_json_declare(spec)]
    assert run() == run()


@settings(max_examples=80, deadline=None)
@given(descriptions())
def test_json_ast_round_trip(d):
    assert ast_from_json(emit_json_ast(d)) == d
