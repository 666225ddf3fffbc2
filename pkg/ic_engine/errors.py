"""Exception hierarchy shared by the engine, services and CLI commands.

Each error carries the process exit code the CLI should use, the same way the
HTTP layer carries a status code alongside a human-readable detail.
"""
from __future__ import annotations


class IndexCodingError(Exception):
    """Base error; `exit_code` is what `main.py` returns for it."""

    exit_code = 1

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail


class InstanceValidationError(IndexCodingError, ValueError):
    """Malformed input or a violated model invariant."""

    exit_code = 2


class BudgetExceededError(IndexCodingError, RuntimeError):
    """A materialization cap, vertex cap or solver/search budget was hit."""

    exit_code = 3

    def __init__(self, detail: str, *, budget: int | None = None) -> None:
        super().__init__(detail)
        self.budget = budget


class InvariantViolationError(IndexCodingError, AssertionError):
    """A checked identity or inequality failed."""

    exit_code = 4
