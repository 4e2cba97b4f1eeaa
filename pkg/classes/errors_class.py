from __future__ import annotations

from typing import Optional


class StructuralError(ValueError):
    """Malformed input: dimension mismatch, wrong cone, negative scale."""


class ConeMismatchError(StructuralError):
    pass


class ValidationError(ValueError):
    """Well-formed input that violates a mathematical precondition.

    ``counterexample`` carries exact data (points, functionals) when the
    failure is witnessed, e.g. a midpoint pair breaking convexity.
    """

    def __init__(self, message: str, counterexample: Optional[dict] = None):
        super().__init__(message)
        self.counterexample = counterexample or {}


class InstanceParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
