"""Exception types shared across the package.

Plain ``ValueError`` is used for ordinary invalid-argument and
out-of-range conditions; the classes below mark conditions callers may
want to catch specifically.
"""

from __future__ import annotations


class DicutSketchError(Exception):
    """Base class for package-specific errors."""


class UndefinedValueError(DicutSketchError):
    """A quantity (cut value, snapshot) was requested on an empty graph."""


class ResourceGuardError(DicutSketchError):
    """An exact computation was refused because it would exceed a guard
    (e.g. brute force above the vertex ceiling)."""


class StreamParseError(DicutSketchError):
    """Malformed edge-stream input. Carries the 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
