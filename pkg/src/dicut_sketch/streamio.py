"""Edge-stream text format shared repo-wide.

UTF-8 lines. The first non-comment line is ``n <N>``; every subsequent
non-comment line is ``u v`` with 1-indexed decimal endpoints, u != v.
Lines starting with ``#`` are comments. Duplicate lines are parallel
edges. Stream order is significant and preserved.
"""

from __future__ import annotations

import io
from typing import Iterable, TextIO

from .errors import StreamParseError


def parse_stream(source: str | TextIO) -> tuple[int, list[tuple[int, int]]]:
    """Parse an edge stream from a file path or open text handle.

    Returns ``(n, edges)`` with edges in stream order.
    """
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return parse_stream(fh)
    return _parse_lines(source)


def parse_stream_text(text: str) -> tuple[int, list[tuple[int, int]]]:
    return _parse_lines(io.StringIO(text))


def _parse_lines(fh: Iterable[str]) -> tuple[int, list[tuple[int, int]]]:
    n: int | None = None
    edges: list[tuple[int, int]] = []
    for line_no, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise StreamParseError("expected header 'n <N>'", line_no)
            try:
                n = int(parts[1])
            except ValueError:
                raise StreamParseError(f"bad vertex count {parts[1]!r}", line_no) from None
            if n < 1:
                raise StreamParseError(f"vertex count must be >= 1, got {n}", line_no)
            continue
        if len(parts) != 2:
            raise StreamParseError(f"expected 'u v', got {line!r}", line_no)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise StreamParseError(f"non-integer endpoint in {line!r}", line_no) from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise StreamParseError(f"endpoint out of range [1, {n}] in {line!r}", line_no)
        if u == v:
            raise StreamParseError(f"self-loop {u} -> {v} not allowed", line_no)
        edges.append((u, v))
    if n is None:
        raise StreamParseError("empty stream: missing 'n <N>' header", 1)
    return n, edges


def write_stream(path: str, n: int, edges: Iterable[tuple[int, int]], comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        fh.write(f"n {n}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")


def format_stream(n: int, edges: Iterable[tuple[int, int]], comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"n {n}")
    out.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"
