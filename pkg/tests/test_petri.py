import random
from collections import Counter

import networkx as nx
import pytest
from hypothesis import given, settings

from beepath.diagnostics import BeePathSemanticError
from beepath.frontend import Variant, parse_text
from beepath.model import analyze
from beepath.petri import (
    FiringError,
    PetriNet,
    StateBudgetExceeded,
    enabled,
    enumerate_complete_traces,
    fire,
    fragment_net,
    replay,
    translate_fragment_pn,
    translate_spec_pn,
)

from .conftest import FLOW_STATEMENTS, SUBPROCESSES, flow_instance, program
from .strategies import descriptions


def _as_graph(net: PetriNet) -> nx.DiGraph:
    g = nx.DiGraph()
    for p in net.places:
        g.add_node(p, kind=("place", net.initial_marking.get(p, 0), net.final_marking.get(p, 0)))
    for t, label in net.transitions.items():
        g.add_node(t, kind=("transition", label))
    g.add_edges_from(net.arcs)
    return g


def isomorphic(a: PetriNet, b: PetriNet) -> bool:
    return nx.is_isomorphic(_as_graph(a), _as_graph(b), node_match=lambda x, y: x["kind"] == y["kind"])


def _counts(variant):
    net = translate_fragment_pn(flow_instance(variant), SUBPROCESSES).as_net()
    return len(net.places), len(net.transitions), len(net.arcs), len(net.silent_transitions)


class TestTokenGame:
    def test_sequence_initially_enables_start(self):
        net = fragment_net(flow_instance("Sequence"), SUBPROCESSES)
        assert enabled(net, net.initial_marking) == {"A_start"}

    def test_empty_marking_enables_nothing(self):
        net = fragment_net(flow_instance("Sequence"), SUBPROCESSES)
        assert enabled(net, {}) == set()

    def test_parallel_split_after_source_ends(self):
        net = fragment_net(flow_instance("ParallelSplit"), SUBPROCESSES)
        m = replay(net, ["A_start", "A_end"])
        assert enabled(net, m) == {"B_start", "C_start"}

    def test_fire_moves_one_token(self):
        net = fragment_net(flow_instance("Sequence"), SUBPROCESSES)
        m0 = dict(net.initial_marking)
        m1 = fire(net, m0, "A_start")
        assert m1 == {net.postset("A_start")[0]: 1}
        delta = sum(m1.values()) - sum(m0.values())
        assert delta == len(net.postset("A_start")) - len(net.preset("A_start"))

    def test_firing_disabled_transition(self):
        net = fragment_net(flow_instance("Sequence"), SUBPROCESSES)
        with pytest.raises(FiringError):
            fire(net, net.initial_marking, "B_start")

    def test_unknown_place_in_marking(self):
        net = fragment_net(flow_instance("Sequence"), SUBPROCESSES)
        with pytest.raises(ValueError):
            enabled(net, {"nowhere": 1})

    def test_repeat_silent_returns_token_to_target(self):
        net = fragment_net(flow_instance("RepeatSince"), SUBPROCESSES)
        (tau,) = net.silent_transitions
        pre_b = net.preset("B_start")
        assert set(net.postset(tau)) <= set(pre_b)
        m = replay(net, ["A_start", "A_end", tau])
        assert "B_start" in enabled(net, m)

    def test_arc_validation(self):
        net = PetriNet()
        net.add_place("p")
        net.add_place("q")
        with pytest.raises(ValueError):
            net.add_arc("p", "q")
        with pytest.raises(ValueError):
            net.add_arc("p", "t")


class TestEnumeration:
    def test_sequence_single_trace(self):
        net = fragment_net(flow_instance("Sequence"), SUBPROCESSES)
        traces = enumerate_complete_traces(net, 6)
        assert [t.labels for t in traces] == [("A_start", "A_end", "B_start", "B_end")]

    def test_zero_length_bound(self):
        net = fragment_net(flow_instance("Sequence"), SUBPROCESSES)
        assert enumerate_complete_traces(net, 0) == set()

    def test_exclusive_choice_two_traces(self):
        net = fragment_net(flow_instance("ExclusiveChoice"), SUBPROCESSES)
        assert len(enumerate_complete_traces(net, 6)) == 2

    def test_state_budget_is_reported(self, hospital_spec):
        with pytest.raises(StateBudgetExceeded):
            enumerate_complete_traces(translate_spec_pn(hospital_spec), 40, max_states=5)

    def test_negative_bound(self):
        with pytest.raises(ValueError):
            enumerate_complete_traces(PetriNet(), -1)

    def test_capacity_warning(self, caplog):
        net = PetriNet()
        net.add_place("src")
        net.add_place("acc")
        net.add_transition("pump", "pump_start")
        net.add_arc("src", "pump")
        net.add_arc("pump", "src")
        net.add_arc("pump", "acc")
        net.initial_marking["src"] = 1
        enumerate_complete_traces(net, 6)
        assert any("acc" in r.getMessage() for r in caplog.records)

    @pytest.mark.parametrize("variant", sorted(FLOW_STATEMENTS))
    def test_traces_replay_and_complete(self, variant):
        net = fragment_net(flow_instance(variant), SUBPROCESSES)
        traces = enumerate_complete_traces(net, 10)
        assert traces
        for t in traces:
            assert replay(net, t.transitions) == net.final_marking

    def test_enumeration_is_deterministic(self, hospital_spec):
        net = translate_spec_pn(hospital_spec)
        assert enumerate_complete_traces(net, 30) == enumerate_complete_traces(net, 30)


class TestGadgets:
    def test_sequence_shape(self):
        assert _counts("Sequence") == (5, 4, 8, 0)

    def test_parallel_split_shape(self):
        net = translate_fragment_pn(flow_instance("ParallelSplit"), SUBPROCESSES).as_net()
        assert (len(net.places), len(net.transitions), len(net.arcs)) == (5, 3, 7)
        assert set(net.transitions) == {"A_end", "B_start", "C_start"}
        assert len(net.postset("A_end")) == 2

    @pytest.mark.parametrize("variant", ["ExclusiveChoice", "SimpleMerge"])
    def test_choice_and_merge_shape(self, variant):
        assert _counts(variant) == (4, 3, 6, 0)

    @pytest.mark.parametrize("variant, silent", [
        ("RepeatSince", 1), ("AndSplitInXorSplit", 1), ("AndJoinInXorJoin", 1),
        ("XorSplitInAndSplit", 0), ("XorJoinInAndJoin", 0), ("Eventually", 0),
    ])
    def test_silent_counts(self, variant, silent):
        assert _counts(variant)[3] == silent

    def test_and_split_in_xor_split_structure(self):
        net = translate_fragment_pn(flow_instance("AndSplitInXorSplit"), SUBPROCESSES).as_net()
        (tau,) = net.silent_transitions
        (choice,) = net.postset("A_end")
        assert set(net.postset(choice)) == {tau, "D_start"}
        assert {t for p in net.postset(tau) for t in net.postset(p)} == {"B_start", "C_start"}

    def test_eventually_matches_sequence(self):
        seq = translate_fragment_pn(flow_instance("Sequence"), SUBPROCESSES).as_net()
        ev = translate_fragment_pn(flow_instance("Eventually"), SUBPROCESSES).as_net()
        assert isomorphic(seq, ev)

    def test_subprocess_declarations_have_no_gadget(self):
        f = flow_instance("Sequence")
        with pytest.raises(ValueError):
            translate_fragment_pn(type(f)(Variant.AND_SUBPROCESS, f.args, 0), SUBPROCESSES)


class TestComposition:
    def test_hospital_net(self, hospital_spec):
        net = translate_spec_pn(hospital_spec)
        labels = [l for l in net.transitions.values() if l is not None]
        assert len(labels) == 34 and len(set(labels)) == 34
        assert len(net.silent_transitions) == 3
        traces = enumerate_complete_traces(net, 40)
        assert traces
        assert min(len(t) for t in traces) <= 40

    def test_sequence_spec_single_trace(self):
        p = analyze(parse_text(program('After "A" ends, immediately start "B".')))
        traces = enumerate_complete_traces(translate_spec_pn(p), 6)
        assert [t.labels for t in traces] == [("A_start", "A_end", "B_start", "B_end")]

    def test_conjunctive_closing_adds_one_silent_join(self):
        src = program('After "A" ends, immediately start "B" and start "C".',
                      closing='After "B" ends and "C" ends, the process finishes.')
        net = translate_spec_pn(analyze(parse_text(src)))
        assert len(net.silent_transitions) == 1
        (tau,) = net.silent_transitions
        assert net.postset(tau) == sorted(net.final_marking)

    def test_disjunctive_closing_in_hospital(self, hospital_spec):
        net = translate_spec_pn(hospital_spec)
        (sink,) = net.final_marking
        feeders = net.preset(sink)
        assert len(feeders) == 3
        assert sum(net.transitions[t] is None for t in feeders) == 1

    def test_repeat_since_initial_activity_reuses_source(self):
        src = program('After "A" ends, immediately repeat since "A" or start "B".')
        net = translate_spec_pn(analyze(parse_text(src)))
        (tau,) = net.silent_transitions
        (source,) = net.initial_marking
        assert net.postset(tau) == [source]

    def test_shared_start_is_implicit_join(self):
        src = program('After "A" ends, immediately start "B" and start "C".',
                      'After "B" ends, immediately start "D".', 'After "C" ends, immediately start "D".',
                      closing='After "D" ends, the process finishes.')
        net = translate_spec_pn(analyze(parse_text(src)))
        assert len(net.preset("D_start")) == 2

    def test_statement_order_independence(self, hospital_description):
        d = hospital_description
        decls = [f for f in d.fragments if f.is_subprocess]
        flows = [f for f in d.fragments if not f.is_subprocess]
        reference = translate_spec_pn(analyze(d))
        rng = random.Random(7)
        for _ in range(5):
            rng.shuffle(flows)
            shuffled = type(d)(d.leading_text, d.initial, tuple(decls + flows), d.closing)
            assert isomorphic(translate_spec_pn(analyze(shuffled)), reference)


@settings(max_examples=120, deadline=None)
@given(descriptions())
def test_composition_laws(d):
    try:
        p = analyze(d)
    except BeePathSemanticError:
        return
    net = translate_spec_pn(p)
    labels = Counter(l for l in net.transitions.values() if l is not None)
    assert all(n == 1 for n in labels.values())
    assert len(labels) == 2 * len(p.registry)
    activity_places = [x for x, why in net.provenance.items() if why.startswith("activity ")]
    assert len(activity_places) == len(p.registry)
    for tau in net.silent_transitions:
        assert tau in net.provenance
    try:
        traces = enumerate_complete_traces(net, 8, max_states=2000)
    except StateBudgetExceeded:
        return
    for t in traces:
        m = dict(net.initial_marking)
        for step in t.transitions:
            m = fire(net, m, step)
            assert all(k >= 0 for k in m.values())
