from .ast import (
    ActRef,
    Closing,
    Description,
    Fragment,
    Variant,
    act,
    sub,
)
from .lexer import KEYWORDS, LEADING_TEXT, Token, tokenize
from .parser import parse, parse_statement, parse_text
from .render import render, render_closing, render_fragment

__all__ = [
    "ActRef",
    "Closing",
    "Description",
    "Fragment",
    "KEYWORDS",
    "LEADING_TEXT",
    "Token",
    "Variant",
    "act",
    "parse",
    "parse_statement",
    "parse_text",
    "render",
    "render_closing",
    "render_fragment",
    "sub",
    "tokenize",
]
