"""Failure taxonomy shared by the strand, geometry and pipeline layers."""

from .arith import ArithError, NotDivisibleError, ParseError, SmallCharacteristicError

__all__ = [
    "ImplicaxError",
    "ParseError",
    "NotDivisibleError",
    "SmallCharacteristicError",
    "HypothesisViolation",
    "ConsistencyError",
]

ImplicaxError = ArithError


class HypothesisViolation(ImplicaxError):
    """The input violates a hypothesis of the implicitization theorems.

    Raised for positive-dimensional base loci, maps that are not generically
    finite, and strand rank profiles inconsistent with generic exactness.
    """


class ConsistencyError(ImplicaxError):
    """An internal cross-check failed (degree mismatch, evaluation oracle)."""
