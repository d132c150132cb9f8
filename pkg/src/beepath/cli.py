"""``beepath`` command line: check, compile, simulate, verify, structure."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .declare import translate_spec_decl, well_formed_automaton
from .diagnostics import BeePathError, Diagnostic
from .emitters import (
    display_label,
    emit_decl,
    emit_dot_automaton,
    emit_dot_petri,
    emit_json_ast,
    emit_json_declare,
    emit_json_petri,
    emit_tpn,
)
from .frontend import parse_text
from .model import ProcessSpec, analyze, validate
from .oracle import project, verify_inclusion
from .petri import StateBudgetExceeded, enumerate_complete_traces, translate_spec_pn
from .petri.net import DEFAULT_MAX_STATES

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MODEL = 2
EXIT_VIOLATION = 3
EXIT_TRANSPORT = 4

FORMATS = {
    "petri": ("dot", "tpn", "json"),
    "declare": ("dot", "decl", "json"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _report(diagnostics: list[Diagnostic], path: str) -> None:
    for d in diagnostics:
        print(f"{path}:{d.line}:{d.column}: {d.severity}: {d.message}", file=sys.stderr)


def _load(args) -> tuple:
    source = Path(args.file).read_text(encoding="utf-8")
    description = parse_text(source, lenient_leading_text=args.lenient_leading_text)
    spec = analyze(description)
    return description, spec


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _warnings_fatal(spec: ProcessSpec, args) -> bool:
    warnings = validate(spec)
    _report(warnings, args.file)
    return bool(warnings) and getattr(args, "strict", False)


def cmd_check(args) -> int:
    _, spec = _load(args)
    if _warnings_fatal(spec, args):
        return EXIT_MODEL
    print(f"{args.file}: ok ({len(spec.registry)} activities, {len(spec.subprocesses)} subprocesses, "
          f"{len(spec.fragments)} fragments)")
    return EXIT_OK


def cmd_compile(args) -> int:
    if args.format not in FORMATS[args.to]:
        print(f"error: --to {args.to} supports --format {', '.join(FORMATS[args.to])}", file=sys.stderr)
        return EXIT_USAGE
    description, spec = _load(args)
    if _warnings_fatal(spec, args):
        return EXIT_MODEL
    if args.to == "petri":
        net = translate_spec_pn(spec)
        emit = {"dot": emit_dot_petri, "tpn": emit_tpn, "json": emit_json_petri}[args.format]
        text = emit(net)
    else:
        decl = translate_spec_decl(spec)
        for note in decl.notes:
            print(f"note: {note}", file=sys.stderr)
        if args.format == "dot":
            text = emit_dot_automaton(well_formed_automaton(decl))
        else:
            text = {"decl": emit_decl, "json": emit_json_declare}[args.format](decl)
    _write(text, args.output)
    return EXIT_OK


def cmd_ast(args) -> int:
    description, _ = _load(args)
    _write(emit_json_ast(description), args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    _, spec = _load(args)
    _report(validate(spec), args.file)
    net = translate_spec_pn(spec)
    traces = {tuple(project(seq)) for seq in enumerate_complete_traces(net, args.max_len, args.max_states)}
    for trace in sorted(traces):
        print(", ".join(display_label(a) for a in trace))
    print(f"{len(traces)} complete trace(s) of at most {args.max_len} steps", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    _, spec = _load(args)
    _report(validate(spec), args.file)
    report = verify_inclusion(translate_spec_pn(spec), translate_spec_decl(spec), args.max_len, args.max_states)
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_structure(args) -> int:
    from .llm import AuthenticationError, EndpointConfig, RetriesExhausted, TransportError, structure

    free_text = Path(args.file).read_text(encoding="utf-8")
    cfg = EndpointConfig(args.endpoint, args.model, args.key_env, args.timeout, args.max_retries)
    try:
        result = structure(free_text, cfg, lenient_leading_text=args.lenient_leading_text)
    except RetriesExhausted as exc:
        _report(exc.diagnostics, "<model output>")
        print(f"error: {exc.attempts} attempt(s) did not produce valid BeePath", file=sys.stderr)
        if exc.last_text:
            Path(_structured_path(args)).with_suffix(".rejected.beepath").write_text(exc.last_text, encoding="utf-8")
        return EXIT_MODEL
    except (TransportError, AuthenticationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    out = _structured_path(args)
    Path(out).write_text(result.text, encoding="utf-8")
    print(f"wrote {out} after {result.retry_count} retr{'y' if result.retry_count == 1 else 'ies'}",
          file=sys.stderr)
    return EXIT_OK


def _structured_path(args) -> str:
    return args.output or str(Path(args.file).with_suffix(".beepath"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="beepath", description="Compile BeePath process descriptions.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def source(p):
        p.add_argument("file")
        p.add_argument("--lenient-leading-text", action="store_true",
                       help="accept any first sentence ending in 'impossible'")

    p = sub.add_parser("check", help="parse and validate")
    source(p)
    p.add_argument("--strict", action="store_true", help="treat warnings as errors")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("compile", help="translate and emit a model")
    source(p)
    p.add_argument("--to", choices=sorted(FORMATS), required=True)
    p.add_argument("--format", choices=["decl", "dot", "json", "tpn"], required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(run=cmd_compile)

    p = sub.add_parser("ast", help="print the syntax tree as JSON")
    source(p)
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_ast)

    for name, run, help_text in (("simulate", cmd_simulate, "list complete traces of the Petri net"),
                                 ("verify", cmd_verify, "check Petri traces against the DECLARE model")):
        p = sub.add_parser(name, help=help_text)
        source(p)
        p.add_argument("--max-len", type=int, default=40)
        p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
        if name == "verify":
            p.add_argument("--json", action="store_true", help="print the report as JSON")
        p.set_defaults(run=run)

    p = sub.add_parser("structure", help="convert free text to BeePath with a language model")
    source(p)
    p.add_argument("--endpoint", required=True, help="base URL of a chat-completion API")
    p.add_argument("--model", required=True)
    p.add_argument("--key-env", default="OPENAI_API_KEY", help="environment variable holding the API key")
    p.add_argument("--timeout", type=float, default=60.0)
    p.add_argument("--max-retries", type=int, default=3)
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_structure)
    return parser


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.run(args)
    except BeePathError as exc:
        _report(exc.diagnostics, args.file)
        return EXIT_MODEL
    except StateBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION if args.command == "verify" else EXIT_MODEL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
