"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "NilprobError",
    "BudgetExceededError",
    "GroupFormatError",
    "VerificationError",
]


class NilprobError(Exception):
    """Base class for package errors."""


class BudgetExceededError(NilprobError):
    """A computation would exceed an explicit size or pair budget."""


class GroupFormatError(NilprobError):
    """A generator file is malformed."""


class VerificationError(NilprobError):
    """A declared invariant (order, normality, simplicity) failed to check out."""
