"""Tokenizer for BeePath text."""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass

from ..diagnostics import BeePathSyntaxError, Diagnostic, error

LEADING_TEXT = (
    "The following textual description follows the closed-world assumption, "
    "meaning that only the activities specified can be executed in the specified "
    "order. Any possible activity and execution that is not specified is "
    "considered impossible"
)

KEYWORDS = frozenset({
    "After", "ends", "immediately", "start", "either", "or", "and", "repeat",
    "since", "eventually", "Initially", "the", "process", "finishes",
})

KEYWORD = "keyword"
ACTIVITY = "activity"
SUBPROCESS = "subprocess"
LEADING = "leading-text"
PUNCT = "punctuation"

_WORD_CHARS = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")
_WORD = re.compile(r"[A-Za-z0-9_]+")
_ACTIVITY_BODY = re.compile(r"[A-Za-z0-9_]+(?: [A-Za-z0-9_]+)*\Z")
_STRICT_LEADING = re.compile(r"\s+".join(re.escape(w) for w in LEADING_TEXT.split()) + r"\.?")
_LENIENT_LEADING = re.compile(r'[^"]*?\bimpossible\.?(?=[ \t]*(?:\r\n|\n|\r|\Z))')
_STATEMENT_START = re.compile(r'^[ \t]*(?:Initially\b|After\b|\()', re.MULTILINE)
_SKIPPED = frozenset(" \t.,\r\n")


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    line: int
    column: int

    @property
    def value(self) -> str:
        """Lexeme with quoting removed (activity names, subprocess ids)."""
        if self.kind in (ACTIVITY, SUBPROCESS):
            return self.lexeme[1:-1]
        if self.kind == LEADING:
            return " ".join(self.lexeme.split()).rstrip(".")
        return self.lexeme

    def __str__(self) -> str:
        if self.kind == LEADING:
            return "LEADINGTEXT"
        return self.lexeme


class _Positions:
    def __init__(self, source: str):
        self._starts = [0] + [m.end() for m in re.finditer(r"\r\n|\n|\r", source)]

    def __call__(self, offset: int) -> tuple[int, int]:
        line = bisect.bisect_right(self._starts, offset)
        return line, offset - self._starts[line - 1] + 1


def _line_end(source: str, i: int) -> int:
    ends = [j for j in (source.find("\n", i), source.find("\r", i)) if j != -1]
    return min(ends) if ends else len(source)


def tokenize(source: str, *, lenient_leading_text: bool = False) -> list[Token]:
    """Split ``source`` into tokens.

    Spaces, tabs, newlines, periods and commas outside literals are skipped.
    Raises :class:`BeePathSyntaxError` listing every lexical error found.
    """
    pos = _Positions(source)
    tokens: list[Token] = []
    errors: list[Diagnostic] = []
    leading_re = _LENIENT_LEADING if lenient_leading_text else _STRICT_LEADING
    i, n = 0, len(source)

    def fail(message: str, offset: int) -> None:
        errors.append(error(message, *pos(offset)))

    while i < n:
        c = source[i]
        if c in _SKIPPED:
            i += 1
        elif c == '"':
            end = source.find('"', i + 1)
            stop = _line_end(source, i)
            if end == -1 or end > stop:
                fail("unterminated activity literal", i)
                i = stop
                continue
            body = source[i + 1:end]
            problem = _literal_problem(body)
            if problem is None:
                tokens.append(Token(ACTIVITY, source[i:end + 1], *pos(i)))
            else:
                fail(problem[0], i + 1 + problem[1])
            i = end + 1
        elif c == "(":
            end = source.find(")", i + 1)
            stop = _line_end(source, i)
            if end == -1 or end > stop:
                fail("unterminated subprocess identifier", i)
                i = stop
                continue
            body = source[i + 1:end]
            bad = next((k for k, ch in enumerate(body) if ch not in _WORD_CHARS), None)
            if not body:
                fail("empty subprocess identifier", i)
            elif bad is not None:
                fail(f"invalid character {body[bad]!r} in subprocess identifier", i + 1 + bad)
            else:
                tokens.append(Token(SUBPROCESS, source[i:end + 1], *pos(i)))
            i = end + 1
        elif c == ":":
            tokens.append(Token(PUNCT, c, *pos(i)))
            i += 1
        elif c in _WORD_CHARS:
            word = _WORD.match(source, i).group()
            if word in KEYWORDS:
                tokens.append(Token(KEYWORD, word, *pos(i)))
                i += len(word)
                continue
            m = leading_re.match(source, i)
            if m:
                tokens.append(Token(LEADING, m.group(), *pos(i)))
                i = m.end()
            elif not tokens:
                fail("malformed LEADINGTEXT: expected the closed-world disclaimer sentence", i)
                nxt = _STATEMENT_START.search(source, _line_end(source, i))
                i = nxt.start() if nxt else n
            else:
                fail(f"unexpected word {word!r}", i)
                i += len(word)
        else:
            fail(f"unexpected character {c!r}", i)
            i += 1

    if errors:
        raise BeePathSyntaxError(errors)
    return tokens


def _literal_problem(body: str) -> tuple[str, int] | None:
    """Return (message, offset into body) for an invalid activity literal."""
    if _ACTIVITY_BODY.match(body):
        return None
    if not body:
        return "empty activity literal", 0
    for k, ch in enumerate(body):
        if ch != " " and ch not in _WORD_CHARS:
            return f"invalid character {ch!r} in activity literal", k
    if body.startswith(" ") or body.endswith(" "):
        k = 0 if body.startswith(" ") else len(body) - 1
        return "activity literal must not start or end with a space", k
    return "activity literal words must be separated by single spaces", body.index("  ")
