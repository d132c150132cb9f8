"""Positioned diagnostics and the exceptions that carry them."""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int = 1
    column: int = 1

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def __str__(self) -> str:
        return f"{self.severity}: {self.message} at {self.line}:{self.column}"


def error(message: str, line: int = 1, column: int = 1) -> Diagnostic:
    return Diagnostic(ERROR, message, line, column)


def warning(message: str, line: int = 1, column: int = 1) -> Diagnostic:
    return Diagnostic(WARNING, message, line, column)


class BeePathError(Exception):
    """Base class for failures that carry a list of diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class BeePathSyntaxError(BeePathError):
    """Lexical or grammatical failure while reading BeePath text."""


class BeePathSemanticError(BeePathError):
    """The text parsed but does not describe a consistent process."""
