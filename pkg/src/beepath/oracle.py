"""Cross-checks the Petri and DECLARE translations of the same input.

Every complete firing sequence of the net, reduced to the activities it
starts, must satisfy the DECLARE specification.  The converse does not hold
and is not checked.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .declare.core import ConstraintInstance, DeclareSpec, check_trace
from .model import END, INIT
from .petri.net import DEFAULT_MAX_STATES, FiringSequence, PetriNet, enumerate_complete_traces

START_SUFFIX = "_start"


def project(seq: FiringSequence | tuple | list) -> list[str]:
    labels = seq.labels if isinstance(seq, FiringSequence) else seq
    return [label[: -len(START_SUFFIX)] for label in labels
            if label is not None and label.endswith(START_SUFFIX)]


def augment(trace: list[str], spec: DeclareSpec) -> list[str]:
    """Add the artificial events the specification refers to."""
    head = [INIT] if spec.references_init else []
    tail = [END] if spec.references_end else []
    return head + list(trace) + tail


@dataclass(frozen=True)
class Violation:
    trace: tuple[str, ...]
    constraints: tuple[ConstraintInstance, ...]


@dataclass(frozen=True)
class InclusionReport:
    checked: int
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        trace_word = "trace" if self.checked == 1 else "traces"
        violation_word = "violation" if len(self.violations) == 1 else "violations"
        return f"{self.checked} {trace_word} checked, {len(self.violations)} {violation_word}"

    def to_text(self) -> str:
        lines = [self.summary()]
        for v in self.violations:
            lines.append(f"  [{', '.join(v.trace)}] violates {', '.join(map(str, v.constraints))}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "checked": self.checked,
            "violations": [
                {"trace": list(v.trace), "constraints": [str(c) for c in v.constraints]}
                for v in self.violations
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def verify_inclusion(net: PetriNet, spec: DeclareSpec, max_len: int,
                     max_states: int = DEFAULT_MAX_STATES) -> InclusionReport:
    """Check every distinct projected complete trace of length at most ``max_len``.

    Firing sequences differing only in silent or end transitions project to
    the same trace and are counted once.
    """
    traces = {tuple(project(seq)) for seq in enumerate_complete_traces(net, max_len, max_states)}
    violations = []
    for trace in sorted(traces):
        verdict = check_trace(spec, augment(list(trace), spec))
        if not verdict:
            violations.append(Violation(trace, verdict.violated))
    return InclusionReport(len(traces), tuple(violations))
