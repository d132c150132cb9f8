"""Turning free text into BeePath with a chat-completion model.

The model's answer is only accepted once it parses and analyzes cleanly;
otherwise the diagnostics go back to the model and it tries again.  The
network exchange sits behind :class:`Transport` so the loop can run against
scripted stubs.
"""

from __future__ import annotations

import logging
import os
import re
from dataclasses import dataclass, field
from typing import Any, Mapping, Protocol

from .diagnostics import BeePathError, Diagnostic
from .frontend.ast import Description
from .frontend.parser import parse_text
from .grammar import GRAMMAR
from .model import analyze

logger = logging.getLogger(__name__)

DEFAULT_MAX_RETRIES = 3

CONTEXT_OVERVIEW = (
    "You convert process descriptions into BeePath, a controlled language for business processes. "
    "The user sends an unstructured description. Answer with BeePath text only, valid under the "
    "grammar below, with one statement per line and nothing before or after it."
)

CONVERSION_RULES = (
    "Name every activity with a verb followed by a noun, for example \"check invoice\".",
    "Every activity that starts must also end somewhere: it is followed by another fragment or "
    "appears in the closing statement.",
    "Declare every subprocess, such as (s1): \"A\" and \"B\", before any statement that uses it.",
)


class StructuringError(Exception):
    """Base class for failures of :func:`structure`."""


class TransportError(StructuringError):
    """The endpoint could not be reached or answered with something unusable."""


class AuthenticationError(StructuringError):
    """No credential is available, or the endpoint rejected it."""


class RetriesExhausted(StructuringError):
    """Every attempt produced text that does not compile."""

    def __init__(self, attempts: int, diagnostics: list[Diagnostic], last_text: str):
        self.attempts = attempts
        self.diagnostics = list(diagnostics)
        self.last_text = last_text
        detail = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"no valid BeePath after {attempts} attempt(s): {detail}")


@dataclass(frozen=True)
class PromptDocument:
    context_overview: str
    grammar_text: str
    conversion_rules: tuple[str, ...]
    user_text: str

    def system_text(self) -> str:
        rules = "\n".join(f"{i}. {r}" for i, r in enumerate(self.conversion_rules, 1))
        return (f"{self.context_overview}\n\n"
                f"Grammar (ANTLR4):\n{self.grammar_text}\n"
                f"Conversion rules:\n{rules}\n")

    def messages(self) -> list[dict[str, str]]:
        return [
            {"role": "system", "content": self.system_text()},
            {"role": "user", "content": self.user_text},
        ]


def build_prompt(free_text: str) -> PromptDocument:
    if not free_text or not free_text.strip():
        raise ValueError("the process description is empty")
    return PromptDocument(CONTEXT_OVERVIEW, GRAMMAR, CONVERSION_RULES, free_text.strip())


@dataclass(frozen=True)
class EndpointConfig:
    """Where to send requests.

    ``key_env`` names the environment variable holding the API key; the key
    itself is read at request time and never stored here.
    """

    base_url: str
    model: str
    key_env: str = "OPENAI_API_KEY"
    timeout: float = 60.0
    max_retries: int = DEFAULT_MAX_RETRIES

    def __post_init__(self):
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")

    @property
    def url(self) -> str:
        base = self.base_url.rstrip("/")
        return base if base.endswith("/chat/completions") else base + "/chat/completions"


class Transport(Protocol):
    def __call__(self, url: str, headers: Mapping[str, str], payload: Mapping[str, Any],
                 timeout: float) -> Mapping[str, Any]:
        """POST ``payload`` as JSON and return the decoded JSON answer."""


@dataclass
class HttpxTransport:
    """The real network exchange."""

    def __call__(self, url, headers, payload, timeout):
        import httpx

        try:
            response = httpx.post(url, headers=dict(headers), json=dict(payload), timeout=timeout)
        except httpx.HTTPError as exc:
            raise TransportError(f"request to {url} failed: {type(exc).__name__}") from None
        if response.status_code in (401, 403):
            raise AuthenticationError(f"endpoint rejected the credential (HTTP {response.status_code})")
        if response.status_code >= 400:
            raise TransportError(f"endpoint answered HTTP {response.status_code}")
        try:
            return response.json()
        except ValueError:
            raise TransportError("endpoint answered with something other than JSON") from None


@dataclass(frozen=True)
class StructuringResult:
    text: str
    description: Description
    retry_count: int
    transcript: tuple[Mapping[str, str], ...] = field(default=(), repr=False)


_FENCE = re.compile(r"^```[A-Za-z0-9_-]*\n(.*?)\n?```\s*$", re.S)


def extract_text(content: str) -> str:
    """The BeePath text of a reply, without a surrounding code fence."""
    content = content.strip()
    m = _FENCE.match(content)
    return (m.group(1) if m else content).strip() + "\n"


def _reply(answer: Mapping[str, Any]) -> str:
    try:
        content = answer["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError):
        raise TransportError("reply has no choices[0].message.content") from None
    if not isinstance(content, str):
        raise TransportError("reply content is not text")
    return content


def _feedback(diagnostics: list[Diagnostic]) -> str:
    lines = "\n".join(f"- {d}" for d in diagnostics)
    return ("That text does not compile:\n" f"{lines}\n"
            "Send the whole corrected description, BeePath text only.")


def _scrub(message: str, secret: str) -> str:
    return message.replace(secret, "***") if secret else message


def structure(free_text: str, cfg: EndpointConfig, transport: Transport | None = None, *,
              lenient_leading_text: bool = False) -> StructuringResult:
    """Ask the model for BeePath, retrying with diagnostics up to ``cfg.max_retries`` times."""
    prompt = build_prompt(free_text)
    key = os.environ.get(cfg.key_env, "")
    if not key:
        raise AuthenticationError(f"environment variable {cfg.key_env} is not set")
    transport = transport or HttpxTransport()
    headers = {"Authorization": f"Bearer {key}", "Content-Type": "application/json"}
    messages = prompt.messages()
    diagnostics: list[Diagnostic] = []
    text = ""

    for attempt in range(cfg.max_retries + 1):
        logger.info("structuring attempt %d of %d against %s", attempt + 1, cfg.max_retries + 1, cfg.url)
        try:
            answer = transport(cfg.url, headers, {"model": cfg.model, "messages": messages}, cfg.timeout)
            content = _reply(answer)
        except StructuringError as exc:
            raise type(exc)(_scrub(str(exc), key)) from None
        text = extract_text(content)
        messages = messages + [{"role": "assistant", "content": content}]
        try:
            description = parse_text(text, lenient_leading_text=lenient_leading_text)
            analyze(description)
        except BeePathError as exc:
            diagnostics = exc.diagnostics
            logger.info("attempt %d rejected with %d diagnostic(s)", attempt + 1, len(diagnostics))
            messages = messages + [{"role": "user", "content": _feedback(diagnostics)}]
            continue
        return StructuringResult(text, description, attempt, tuple(messages))
    raise RetriesExhausted(cfg.max_retries + 1, diagnostics, text)
