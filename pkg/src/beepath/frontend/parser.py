"""Recursive-descent parser producing :class:`Description` trees.

The grammar is deterministic once the keywords ``either``, ``and``, ``or``,
``repeat`` and ``eventually`` and the argument kinds are known, so no
backtracking is needed.  Basic and nested variants share their textual shape;
a fragment is classified as nested as soon as one of its branches names a
subprocess.
"""

from __future__ import annotations

from ..diagnostics import BeePathSyntaxError, Diagnostic, error
from .ast import ActRef, Closing, Description, Fragment, Variant
from .lexer import ACTIVITY, KEYWORD, LEADING, PUNCT, SUBPROCESS, Token, tokenize


class _Failure(Exception):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic


class _Stream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self, k: int = 0) -> Token | None:
        j = self.i + k
        return self.tokens[j] if j < len(self.tokens) else None

    def at_keyword(self, word: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok is not None and tok.kind == KEYWORD and tok.lexeme == word

    def accept(self, word: str) -> Token | None:
        if self.at_keyword(word):
            return self.next()
        return None

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: str) -> _Failure:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            where = (last.line, last.column) if last else (1, 1)
            return _Failure(error(f"expected {expected} but reached end of input", *where))
        return _Failure(error(f"expected {expected} but found {tok}", tok.line, tok.column))

    def expect(self, word: str) -> Token:
        tok = self.accept(word)
        if tok is None:
            raise self.fail(repr(word))
        return tok

    def activity(self) -> ActRef:
        tok = self.peek()
        if tok is None or tok.kind != ACTIVITY:
            raise self.fail("ACTIVITY")
        self.next()
        return ActRef(tok.value, False, tok.line, tok.column)

    def act_fragment(self) -> ActRef:
        tok = self.peek()
        if tok is None or tok.kind not in (ACTIVITY, SUBPROCESS):
            raise self.fail("ACTIVITY or SUBPROCESS_ID")
        self.next()
        return ActRef(tok.value, tok.kind == SUBPROCESS, tok.line, tok.column)

    def at_statement_start(self) -> bool:
        tok = self.peek()
        if tok is None:
            return True
        if tok.kind == KEYWORD and tok.lexeme == "After":
            return True
        nxt = self.peek(1)
        return tok.kind == SUBPROCESS and nxt is not None and nxt.kind == PUNCT

    def resync(self) -> None:
        """Skip to the next token that can begin a statement."""
        if self.peek() is not None:
            self.i += 1
        while not self.at_statement_start():
            self.i += 1


def _require_activity(ref: ActRef, what: str) -> ActRef:
    if ref.subprocess:
        raise _Failure(error(f"{what} must be an ACTIVITY, not subprocess {ref}", ref.line, ref.column))
    return ref


def _nested(refs) -> bool:
    return any(r.subprocess for r in refs)


def _after_statement(s: _Stream) -> Fragment | Closing:
    head = s.expect("After")
    if s.accept("either"):
        sources = [s.act_fragment()]
        s.expect("ends")
        while s.accept("or"):
            sources.append(s.act_fragment())
            s.expect("ends")
        if len(sources) < 2:
            raise s.fail("'or'")
        junction = "or"
    else:
        sources = [s.act_fragment()]
        s.expect("ends")
        while s.accept("and"):
            sources.append(s.act_fragment())
            s.expect("ends")
        junction = "and" if len(sources) > 1 else None

    pos = (head.line, head.column)
    if s.at_keyword("the"):
        s.expect("the")
        s.expect("process")
        s.expect("finishes")
        mode = {"or": "disjunctive", "and": "conjunctive", None: "single"}[junction]
        return Closing(mode, tuple(sources), *pos)

    if s.accept("eventually"):
        if junction:
            raise s.fail("'immediately'")
        s.expect("start")
        source = _require_activity(sources[0], "the source of an eventually fragment")
        return Fragment(Variant.EVENTUALLY, (source, s.activity()), None, *pos)

    if not s.accept("immediately"):
        raise s.fail("'immediately', 'eventually' or 'the process finishes'")

    if junction:
        s.expect("start")
        target = s.activity()
        if junction == "and":
            variant = Variant.XOR_JOIN_IN_AND_JOIN if _nested(sources) else Variant.SYNCHRONIZATION
        else:
            variant = Variant.AND_JOIN_IN_XOR_JOIN if _nested(sources) else Variant.SIMPLE_MERGE
        return Fragment(variant, (*sources, target), None, *pos)

    source = _require_activity(sources[0], "the source of a split fragment")
    if s.accept("either"):
        s.expect("start")
        targets = [s.act_fragment()]
        while s.accept("or"):
            s.expect("start")
            targets.append(s.act_fragment())
        if len(targets) < 2:
            raise s.fail("'or'")
        variant = Variant.AND_SPLIT_IN_XOR_SPLIT if _nested(targets) else Variant.EXCLUSIVE_CHOICE
        return Fragment(variant, (source, *targets), None, *pos)

    if s.accept("repeat"):
        s.expect("since")
        args = [source, s.activity()]
        s.expect("or")
        s.expect("start")
        args.append(s.activity())
        while s.accept("or"):
            s.expect("start")
            args.append(s.activity())
        return Fragment(Variant.REPEAT_SINCE, tuple(args), None, *pos)

    s.expect("start")
    targets = [s.act_fragment()]
    while s.accept("and"):
        s.expect("start")
        targets.append(s.act_fragment())
    if len(targets) == 1:
        target = _require_activity(targets[0], "the target of a sequence fragment")
        return Fragment(Variant.SEQUENCE, (source, target), None, *pos)
    variant = Variant.XOR_SPLIT_IN_AND_SPLIT if _nested(targets) else Variant.PARALLEL_SPLIT
    return Fragment(variant, (source, *targets), None, *pos)


def _subprocess_statement(s: _Stream) -> Fragment:
    head = s.next()
    tok = s.peek()
    if tok is None or tok.kind != PUNCT:
        raise s.fail("':'")
    s.next()
    members = [s.activity()]
    if s.at_keyword("and"):
        joiner, variant = "and", Variant.AND_SUBPROCESS
    elif s.at_keyword("or"):
        joiner, variant = "or", Variant.OR_SUBPROCESS
    else:
        raise s.fail("'and' or 'or'")
    while s.accept(joiner):
        members.append(s.activity())
    return Fragment(variant, tuple(members), head.value, head.line, head.column)


def _statement(s: _Stream) -> Fragment | Closing:
    tok = s.peek()
    if tok is not None and tok.kind == SUBPROCESS:
        result = _subprocess_statement(s)
    elif s.at_keyword("After"):
        result = _after_statement(s)
    else:
        raise s.fail("'After' or a subprocess declaration")
    if not s.at_statement_start():
        raise s.fail("end of statement")
    return result


def parse(tokens: list[Token]) -> Description:
    """Build a :class:`Description` from a token list.

    After a malformed statement the parser resynchronises at the next
    statement start so that several errors can be reported at once; any error
    makes the whole parse fail with :class:`BeePathSyntaxError`.
    """
    s = _Stream(tokens)
    errors: list[Diagnostic] = []

    tok = s.peek()
    if tok is None or tok.kind != LEADING:
        where = (tok.line, tok.column) if tok else (1, 1)
        found = f"found {tok}" if tok else "reached end of input"
        raise BeePathSyntaxError([error(f"expected LEADINGTEXT (the closed-world disclaimer) but {found}", *where)])
    leading = s.next().value

    try:
        first = s.expect("Initially")
        s.expect("start")
        initial = s.activity()
    except _Failure as exc:
        raise BeePathSyntaxError([exc.diagnostic]) from None
    if not s.at_statement_start():
        raise BeePathSyntaxError([s.fail("end of statement").diagnostic])

    fragments: list[Fragment] = []
    closing: Closing | None = None
    while s.peek() is not None:
        try:
            item = _statement(s)
        except _Failure as exc:
            errors.append(exc.diagnostic)
            s.resync()
            continue
        if closing is not None:
            errors.append(error("closing statement must be the last statement", closing.line, closing.column))
            closing = None
        if isinstance(item, Closing):
            closing = item
        else:
            fragments.append(item)

    last = tokens[-1]
    if not fragments and not errors:
        errors.append(error("expected at least one fragment after the initial statement", last.line, last.column))
    if closing is None and not errors:
        errors.append(error("missing closing statement ('After ... ends, the process finishes')", last.line, last.column))
    if errors:
        raise BeePathSyntaxError(errors)
    return Description(leading, initial.name, tuple(fragments), closing, first.line, first.column)


def parse_text(source: str, *, lenient_leading_text: bool = False) -> Description:
    return parse(tokenize(source, lenient_leading_text=lenient_leading_text))


def parse_statement(source: str) -> Fragment | Closing:
    """Parse exactly one fragment or closing statement, e.g. a single table row."""
    tokens = tokenize(source)
    if not tokens:
        raise BeePathSyntaxError([error("expected a statement but the text is empty")])
    s = _Stream(tokens)
    try:
        item = _statement(s)
        if s.peek() is not None:
            raise s.fail("end of input")
    except _Failure as exc:
        raise BeePathSyntaxError([exc.diagnostic]) from None
    return item
