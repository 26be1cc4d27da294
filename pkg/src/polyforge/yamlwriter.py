"""Minimal deterministic YAML rendering.

Mappings keep insertion order, indentation is two spaces, sequences render
as `- item` blocks. Scalars stay plain except strings wrapped in
SingleQuoted (or the rare value that would misparse as YAML syntax, which is
single-quoted defensively). No anchors, no flow style except empty `{}`/`[]`.
Output is byte-stable across runs and platforms.
"""

from __future__ import annotations

from typing import Mapping, Sequence


class SingleQuoted(str):
    """String that must render single-quoted (e.g. a version number)."""


_UNSAFE_LEAD = set("!&*?{}[]#|>@`\"'%,")


def _needs_quotes(text: str) -> bool:
    if text == "":
        return True
    if text[0] in _UNSAFE_LEAD or text[0].isspace() or text[-1].isspace():
        return True
    if text.startswith(("- ", ": ")) or text == "-" or text == ":":
        return True
    return ": " in text or " #" in text


def _scalar(value: object) -> str:
    if isinstance(value, SingleQuoted):
        return "'" + value.replace("'", "''") + "'"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    text = str(value)
    if _needs_quotes(text):
        return "'" + text.replace("'", "''") + "'"
    return text


def _map_lines(mapping: Mapping, level: int) -> list[str]:
    pad = "  " * level
    lines: list[str] = []
    for key, value in mapping.items():
        if isinstance(value, Mapping):
            if value:
                lines.append(f"{pad}{key}:")
                lines.extend(_map_lines(value, level + 1))
            else:
                lines.append(f"{pad}{key}: {{}}")
        elif isinstance(value, Sequence) and not isinstance(value, (str, bytes)):
            if value:
                lines.append(f"{pad}{key}:")
                lines.extend(_seq_lines(value, level + 1))
            else:
                lines.append(f"{pad}{key}: []")
        else:
            lines.append(f"{pad}{key}: {_scalar(value)}")
    return lines


def _seq_lines(items: Sequence, level: int) -> list[str]:
    pad = "  " * level
    lines: list[str] = []
    for item in items:
        if isinstance(item, Mapping):
            sub = _map_lines(item, level + 1)
            head = sub[0]
            lines.append(pad + "- " + head[len(pad) + 2:])
            lines.extend(sub[1:])
        elif isinstance(item, Sequence) and not isinstance(item, (str, bytes)):
            raise TypeError("nested sequences are not supported")
        else:
            lines.append(f"{pad}- {_scalar(item)}")
    return lines


def render(document: Mapping) -> str:
    """Render a top-level mapping; always ends with a newline."""
    return "\n".join(_map_lines(document, 0)) + "\n"
