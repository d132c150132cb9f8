"""Compiler toolkit for BeePath process descriptions."""

from .declare import DeclareSpec, translate_spec_decl
from .diagnostics import BeePathError, BeePathSemanticError, BeePathSyntaxError, Diagnostic
from .frontend import parse_text, render
from .model import ProcessSpec, analyze, validate
from .petri import PetriNet, translate_spec_pn

__version__ = "0.1.0"

__all__ = [
    "BeePathError",
    "BeePathSemanticError",
    "BeePathSyntaxError",
    "DeclareSpec",
    "Diagnostic",
    "PetriNet",
    "ProcessSpec",
    "analyze",
    "parse_text",
    "render",
    "translate_spec_decl",
    "translate_spec_pn",
    "validate",
]
