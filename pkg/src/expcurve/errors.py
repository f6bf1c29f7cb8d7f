"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ExpcurveError(Exception):
    """Base class for all library errors."""


class InvalidSpec(ExpcurveError, ValueError):
    """An alpha description or argument violates its declared invariants."""


class PrecisionExhausted(ExpcurveError):
    """The precision (or digit) budget ran out before a quantity was decided."""


class CapExceeded(ExpcurveError):
    """An exact integer would exceed the configured digit cap or a search cap."""


class ListTooShort(ExpcurveError, IndexError):
    """A convergent table does not reach far enough for the request."""


class DomainError(ExpcurveError, ValueError):
    """Argument outside the mathematical domain of the function."""


class RankDeficiencyUnresolved(ExpcurveError):
    """A numerical null-space could not be isolated at any allowed precision."""
