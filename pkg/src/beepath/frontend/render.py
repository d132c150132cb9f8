"""Canonical BeePath text for syntax trees."""

from __future__ import annotations

from .ast import (
    CHOICE_VARIANTS,
    JOIN_VARIANTS,
    MERGE_VARIANTS,
    SPLIT_VARIANTS,
    Closing,
    Description,
    Fragment,
    Variant,
)


def render_fragment(f: Fragment) -> str:
    """One statement in the form used by the fragment catalogue.

    Flow statements end with a period; subprocess declarations are written
    without one, as in the catalogue.
    """
    a = [str(x) for x in f.args]
    v = f.variant
    if v is Variant.SEQUENCE:
        return f"After {a[0]} ends, immediately start {a[1]}."
    if v is Variant.EVENTUALLY:
        return f"After {a[0]} ends, eventually start {a[1]}."
    if v in SPLIT_VARIANTS:
        return f"After {a[0]} ends, immediately " + " and ".join(f"start {x}" for x in a[1:]) + "."
    if v in CHOICE_VARIANTS:
        return f"After {a[0]} ends, immediately either " + " or ".join(f"start {x}" for x in a[1:]) + "."
    if v in JOIN_VARIANTS:
        return "After " + " and ".join(f"{x} ends" for x in a[:-1]) + f", immediately start {a[-1]}."
    if v in MERGE_VARIANTS:
        return "After either " + " or ".join(f"{x} ends" for x in a[:-1]) + f", immediately start {a[-1]}."
    if v is Variant.REPEAT_SINCE:
        rest = " or ".join(f"start {x}" for x in a[2:])
        return f"After {a[0]} ends, immediately repeat since {a[1]} or {rest}."
    joiner = " and " if v is Variant.AND_SUBPROCESS else " or "
    return f"({f.subprocess_id}): " + joiner.join(a)


def render_closing(c: Closing) -> str:
    a = [str(x) for x in c.args]
    if c.mode == "disjunctive":
        body = "either " + " or ".join(f"{x} ends" for x in a)
    else:
        body = " and ".join(f"{x} ends" for x in a)
    return f"After {body}, the process finishes."


def render(d: Description) -> str:
    """Render ``d`` one statement per line, every line ending with a period."""
    lines = [d.leading_text + ".", f'Initially start "{d.initial}".']
    for f in d.fragments:
        text = render_fragment(f)
        lines.append(text if text.endswith(".") else text + ".")
    lines.append(render_closing(d.closing))
    return "\n".join(lines) + "\n"
