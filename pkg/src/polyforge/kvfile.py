"""Line-oriented `key = value` files, shared by answers and catalog files.

Blank lines are skipped and lines whose first non-blank characters are `//`
are comments. A `//` after the `=` belongs to the value, so URLs and image
references survive. Keys split on the first `=` only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

KEY_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*\Z")


class KvFormatError(Exception):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class KvLine:
    key: str
    raw_value: str
    line: int


def read_kv(text: str) -> list[KvLine]:
    entries: list[KvLine] = []
    for number, raw in enumerate(text.replace("\r\n", "\n").split("\n"), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("//"):
            continue
        if "=" not in stripped:
            raise KvFormatError(number, "expected 'key = value'")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if not KEY_RE.match(key):
            raise KvFormatError(number, f"invalid key {key!r}")
        entries.append(KvLine(key, value.strip(), number))
    return entries
