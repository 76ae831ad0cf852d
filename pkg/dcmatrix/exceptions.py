"""Errors raised by dcmatrix."""

from __future__ import annotations

from typing import Any

from .const import (
    EXIT_DATA_SHAPE_ERROR,
    EXIT_DOMAIN_ERROR,
    EXIT_PARSE_ERROR,
    EXIT_VERIFY_FAILED,
)


class DoubleConstantError(Exception):
    """General dcmatrix error."""

    exit_code: int = EXIT_DOMAIN_ERROR


class InvalidParameterError(DoubleConstantError):
    """A constructor or operation received an invalid parameter."""


class DimensionMismatchError(DoubleConstantError):
    """Operands do not share a compatible dimension."""

    exit_code = EXIT_DATA_SHAPE_ERROR


class EmptyInputError(DoubleConstantError):
    """A sequence, matrix or group was empty."""

    exit_code = EXIT_DATA_SHAPE_ERROR


class InsufficientDataError(DoubleConstantError):
    """Too few observations to leave any degrees of freedom."""

    exit_code = EXIT_DATA_SHAPE_ERROR


class DomainError(DoubleConstantError):
    """An eigenvalue lies outside the domain of a matrix function."""

    def __init__(self, message: str, eigenvalue: str, value: float) -> None:
        """Construct a DomainError naming the failing eigenvalue."""
        super().__init__(message)
        self.eigenvalue = eigenvalue
        self.value = value


class SingularMatrixError(DomainError):
    """A zero eigenvalue prevents inversion."""


class EquicorrelationRangeError(DomainError):
    """The correlation parameter is outside the positive-definite range."""

    def __init__(self, message: str, bound: str, value: float) -> None:
        """Construct an EquicorrelationRangeError naming the violated bound."""
        super().__init__(message, bound, value)
        self.bound = bound


class ProportionalBasisError(DoubleConstantError):
    """The two basis matrices are proportional to each other."""


class RankDeficientError(DoubleConstantError):
    """The centered design matrix does not have full column rank."""


class ImaginaryResidueError(DoubleConstantError):
    """A Fourier round trip left a non-negligible imaginary part."""

    exit_code = EXIT_VERIFY_FAILED


class InternalConsistencyError(DoubleConstantError):
    """Two computations of the same quantity disagree."""

    exit_code = EXIT_VERIFY_FAILED


class ParseError(DoubleConstantError):
    """Numeric input could not be parsed."""

    exit_code = EXIT_PARSE_ERROR

    def __init__(
        self, message: str, line: int | None = None, column: int | None = None
    ) -> None:
        """Construct a ParseError with an optional line/column position (1-based)."""
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class InvariantViolation(DoubleConstantError):
    """A verification invariant failed."""

    exit_code = EXIT_VERIFY_FAILED

    def __init__(self, name: str, counterexample: dict[str, Any]) -> None:
        """Construct an InvariantViolation for a named invariant."""
        super().__init__(f"{name} violated: {counterexample}")
        self.name = name
        self.counterexample = counterexample
