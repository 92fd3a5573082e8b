"""APX serialization for argumentation frameworks.

APX is the line-oriented ``arg(name).`` / ``att(a,b).`` format consumed
by most off-the-shelf abstract-argumentation solvers.  Export names are
sanitized to lowercase alphanumerics and lines are emitted sorted, so
the output is canonical and diffable.
"""

from __future__ import annotations

import re
from pathlib import Path

from .corpus import Stance
from .framework import AbstractArgument, ArgumentationFramework

__all__ = ["export_apx", "parse_apx", "framework_from_apx", "ApxParseError"]

_ARG_RE = re.compile(r"^arg\(([^(),\s]+)\)\.$")
_ATT_RE = re.compile(r"^att\(([^(),\s]+),([^(),\s]+)\)\.$")


class ApxParseError(ValueError):
    """An APX document is malformed or references undeclared arguments."""


def _sanitize(label: str) -> str:
    return "".join(ch for ch in label.lower() if ch.isalnum())


def argument_names(af: ArgumentationFramework) -> dict[int, str]:
    """Deterministic APX name per argument id.

    The name is the sanitized smallest member ADU id; collisions and
    empty sanitizations fall back to ``x<id>``.
    """
    names: dict[int, str] = {}
    used: set[str] = set()
    for arg in af.arguments:
        name = _sanitize(min(arg.adu_ids))
        if not name or name in used:
            name = f"x{arg.id}"
            while name in used:  # the fallback itself may be taken
                name = "x" + name
        names[arg.id] = name
        used.add(name)
    return names


def export_apx(af: ArgumentationFramework) -> str:
    """Serialize an AF as APX text, one fact per line, lines sorted."""
    names = argument_names(af)
    lines = [f"arg({names[a.id]})." for a in af.arguments]
    lines += [f"att({names[s]},{names[t]})." for s, t in af.attacks]
    return "".join(line + "\n" for line in sorted(lines))


def parse_apx(text: str) -> tuple[list[str], set[tuple[str, str]]]:
    """Parse APX text into (argument names, attack name pairs).

    Argument order follows first declaration.  Blank lines are ignored;
    anything else is an error.
    """
    args: list[str] = []
    seen: set[str] = set()
    attacks: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if m := _ARG_RE.match(line):
            name = m.group(1)
            if name in seen:
                raise ApxParseError(f"line {lineno}: duplicate arg({name})")
            args.append(name)
            seen.add(name)
        elif m := _ATT_RE.match(line):
            attacks.add((m.group(1), m.group(2)))
        else:
            raise ApxParseError(f"line {lineno}: unrecognized line {line!r}")
    for s, t in attacks:
        for name in (s, t):
            if name not in seen:
                raise ApxParseError(f"attack references undeclared arg {name!r}")
    return args, attacks


def framework_from_apx(
    text: str, *, framework_id: str = "apx"
) -> ArgumentationFramework:
    """Build a stance-agnostic AF from APX text.

    APX carries no stance or ADU grouping, so each argument becomes a
    singleton whose member id is its APX name and whose stance defaults
    to Favour.  Semantics enumeration never consults stances, so the
    result is fully usable for solving.
    """
    names, attacks = parse_apx(text)
    index = {name: i for i, name in enumerate(names)}
    arguments = tuple(
        AbstractArgument(id=i, adu_ids=frozenset({name}), stance=Stance.FAVOUR)
        for i, name in enumerate(names)
    )
    return ArgumentationFramework(
        debate_id=framework_id,
        arguments=arguments,
        attacks=frozenset((index[s], index[t]) for s, t in attacks),
    )


def load_apx(path: str | Path) -> ArgumentationFramework:
    path = Path(path)
    return framework_from_apx(
        path.read_text(encoding="utf-8"), framework_id=path.stem
    )
