from .core import (
    DFA,
    C,
    ConstraintInstance,
    DeclareSpec,
    Template,
    Verdict,
    boundary_automaton,
    check_trace,
    constraint_automaton,
    isomorphic,
    minimize,
    product,
    spec_automaton,
    trim,
    universal,
    well_formed_automaton,
)
from .translate import fragment_spec, translate_fragment_decl, translate_spec_decl

__all__ = [
    "C",
    "ConstraintInstance",
    "DFA",
    "DeclareSpec",
    "Template",
    "Verdict",
    "boundary_automaton",
    "check_trace",
    "constraint_automaton",
    "fragment_spec",
    "isomorphic",
    "minimize",
    "product",
    "spec_automaton",
    "translate_fragment_decl",
    "translate_spec_decl",
    "trim",
    "universal",
    "well_formed_automaton",
]
