"""Lite in-process associative triple store.

Sparse (row, col, value) triples with glob-pattern queries, standing in for
the production sparse-database layer. Values are string-or-number because
the delimited source files are untyped text; the persistence format
canonicalizes anything that parses as a number back into a number.

Persistence is a sorted TSV: ``row<TAB>col<TAB>val`` lines, UTF-8, LF
endings, written atomically (temp file + rename).
"""

from __future__ import annotations

import os
import re
import threading
from typing import Iterator, Union

Value = Union[str, int, float]


class StoreKeyError(ValueError):
    """Row or column key rejected (empty, or contains tab/newline)."""


class PatternError(ValueError):
    """Glob pattern could not be compiled."""


_FORBIDDEN_KEY_CHARS = ("\t", "\n", "\r")


def glob_to_regex(pattern: str) -> "re.Pattern[str]":
    """Compile a glob (``*``, ``?``, ``[...]`` classes, literals) to a regex.

    Raises PatternError on an unterminated character class; fnmatch silently
    treats those as literals, which would hide configuration typos.
    """
    out = []
    i = 0
    n = len(pattern)
    while i < n:
        ch = pattern[i]
        if ch == "*":
            out.append(".*")
        elif ch == "?":
            out.append(".")
        elif ch == "[":
            j = i + 1
            if j < n and pattern[j] in "!^":
                j += 1
            if j < n and pattern[j] == "]":
                j += 1
            while j < n and pattern[j] != "]":
                j += 1
            if j >= n:
                raise PatternError(f"unterminated character class in glob: {pattern!r}")
            body = pattern[i + 1 : j]
            if body.startswith("!"):
                body = "^" + body[1:]
            out.append("[" + body.replace("\\", "\\\\") + "]")
            i = j
        else:
            out.append(re.escape(ch))
        i += 1
    try:
        return re.compile("(?s:" + "".join(out) + ")\\Z")
    except re.error as exc:
        raise PatternError(f"bad glob {pattern!r}: {exc}") from exc


def glob_match(pattern: str, text: str) -> bool:
    return glob_to_regex(pattern).match(text) is not None


def parse_value(text: str) -> Value:
    """Interpret a persisted cell: int, then float, else the raw string."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        val = float(text)
    except ValueError:
        return text
    # reject nan/inf round-trips; those were never valid numeric cells
    if val != val or val in (float("inf"), float("-inf")):
        return text
    return val


def format_value(val: Value) -> str:
    if isinstance(val, bool):
        raise StoreKeyError("boolean values are not part of the store model")
    if isinstance(val, float):
        return repr(val)
    return str(val)


def _check_key(name: str, key: str) -> None:
    if not key:
        raise StoreKeyError(f"{name} key must be non-empty")
    for ch in _FORBIDDEN_KEY_CHARS:
        if ch in key:
            raise StoreKeyError(f"{name} key contains forbidden character {ch!r}")


class AssocStore:
    """Single-process sorted associative array keyed by (row, col).

    Last write wins per (row, col). Safe for concurrent readers; writes are
    serialized internally but callers should honor a single-writer contract.
    """

    def __init__(self) -> None:
        self._data: dict[tuple[str, str], Value] = {}
        self._sorted_keys: list[tuple[str, str]] | None = []
        self._write_lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._data)

    def insert(self, row: str, col: str, val: Value) -> None:
        _check_key("row", row)
        _check_key("col", col)
        with self._write_lock:
            if (row, col) not in self._data:
                self._sorted_keys = None
            self._data[(row, col)] = val

    def get(self, row: str, col: str, default: Value | None = None) -> Value | None:
        return self._data.get((row, col), default)

    def _keys(self) -> list[tuple[str, str]]:
        keys = self._sorted_keys
        if keys is None:
            keys = sorted(self._data)
            self._sorted_keys = keys
        return keys

    def triples(self) -> Iterator[tuple[str, str, Value]]:
        """All triples in lexicographic (row, col) order."""
        data = self._data
        for key in self._keys():
            yield key[0], key[1], data[key]

    def query(self, row_pattern: str, col_pattern: str) -> "AssocStore":
        """Sub-store of triples whose row and col match the glob patterns."""
        row_re = glob_to_regex(row_pattern)
        col_re = glob_to_regex(col_pattern)
        out = AssocStore()
        data = self._data
        for row, col in self._keys():
            if row_re.match(row) and col_re.match(col):
                out._data[(row, col)] = data[(row, col)]
        out._sorted_keys = None
        return out

    def rows(self) -> list[str]:
        seen: dict[str, None] = {}
        for row, _ in self._keys():
            seen.setdefault(row)
        return list(seen)

    def save(self, path: str | os.PathLike) -> None:
        """Write sorted TSV triples atomically."""
        path = os.fspath(path)
        tmp = path + ".tmp"
        with self._write_lock:
            lines = [
                f"{row}\t{col}\t{format_value(val)}\n" for row, col, val in self.triples()
            ]
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            fh.writelines(lines)
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "AssocStore":
        store = cls()
        with open(path, "r", encoding="utf-8", newline="") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise StoreKeyError(f"{path}:{lineno}: expected 3 tab-separated fields")
                row, col, raw = parts
                store.insert(row, col, parse_value(raw))
        return store
