"""The double-constant matrix value.

A double-constant matrix M(a, t) is the n×n symmetric matrix with ``a`` on
the diagonal and ``t`` everywhere else, i.e. (a - t)·I + t·1. It is stored as
the three scalars (n, a, t); its two distinct eigenvalues are always derived:

    lambda_major = a - t            (multiplicity n - 1)
    lambda_minor = a - t + n·t      (multiplicity 1)
"""

from __future__ import annotations

from enum import Enum
import logging
import math
from typing import Any

import attr
import numpy as np
from numpy.typing import ArrayLike, NDArray

from .const import (
    CLASS_CENTERING_PROPORTIONAL,
    CLASS_INDEFINITE,
    CLASS_NEGATIVE_DEFINITE,
    CLASS_NON_ZERO_CONSTANT,
    CLASS_POSITIVE_DEFINITE,
    CLASS_SCALED_IDENTITY,
    CLASS_ZERO,
    DEFAULT_TOLERANCE,
    EIGENVALUE_RTOL,
    MACHINE_EPS,
)
from .exceptions import (
    DimensionMismatchError,
    InvalidParameterError,
    ProportionalBasisError,
)

_LOGGER: logging.Logger = logging.getLogger(__name__)

DenseMatrix = NDArray[np.float64]


def _as_float(value: Any) -> float:
    """Convert a scalar to float, rejecting anything that is not a real."""
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise InvalidParameterError(f"Expected a real number, got {value!r}") from exc


def _validate_dimension(instance: Any, attribute: attr.Attribute, value: Any) -> None:
    """Validate a matrix dimension."""
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InvalidParameterError(
            f"{attribute.name} must be an integer, got {value!r}"
        )
    if value < 1:
        raise InvalidParameterError(f"{attribute.name} must be at least 1, got {value}")


def _validate_finite(instance: Any, attribute: attr.Attribute, value: float) -> None:
    """Validate that a constant is a finite real."""
    if not math.isfinite(value):
        raise InvalidParameterError(f"{attribute.name} must be finite, got {value}")


@attr.s(frozen=True, slots=True, auto_attribs=True)
class DoubleConstant:
    """An n×n matrix with a on the diagonal and t off the diagonal."""

    n: int = attr.ib(validator=_validate_dimension)
    a: float = attr.ib(converter=_as_float, validator=_validate_finite)
    t: float = attr.ib(converter=_as_float, validator=_validate_finite)

    @property
    def lambda_major(self) -> float:
        """Return the major eigenvalue a - t (multiplicity n - 1)."""
        return self.a - self.t

    @property
    def lambda_minor(self) -> float:
        """Return the minor eigenvalue a - t + n·t (multiplicity 1)."""
        return self.a - self.t + self.n * self.t


@attr.s(frozen=True, slots=True, auto_attribs=True)
class CanonicalForm:
    """The eigenvalue view (n, lambda_major, lambda_minor) of a matrix."""

    n: int = attr.ib(validator=_validate_dimension)
    lambda_major: float = attr.ib(converter=_as_float, validator=_validate_finite)
    lambda_minor: float = attr.ib(converter=_as_float, validator=_validate_finite)


class MatrixClass(str, Enum):
    """Partition of the double-constant matrices by their eigenvalue signs."""

    ZERO = CLASS_ZERO
    NON_ZERO_CONSTANT = CLASS_NON_ZERO_CONSTANT
    SCALED_IDENTITY = CLASS_SCALED_IDENTITY
    CENTERING_PROPORTIONAL = CLASS_CENTERING_PROPORTIONAL
    POSITIVE_DEFINITE = CLASS_POSITIVE_DEFINITE
    NEGATIVE_DEFINITE = CLASS_NEGATIVE_DEFINITE
    INDEFINITE = CLASS_INDEFINITE


def new(n: int, a: float, t: float) -> DoubleConstant:
    """Construct M(a, t) of dimension n."""
    return DoubleConstant(n, a, t)


def identity(n: int) -> DoubleConstant:
    """Get the n×n identity matrix."""
    return DoubleConstant(n, 1.0, 0.0)


def zeros(n: int) -> DoubleConstant:
    """Get the n×n zero matrix."""
    return DoubleConstant(n, 0.0, 0.0)


def ones(n: int) -> DoubleConstant:
    """Get the n×n unit matrix (every entry one)."""
    return DoubleConstant(n, 1.0, 1.0)


def mean_matrix(n: int) -> DoubleConstant:
    """Get the averaging matrix 1/n, every entry 1/n."""
    return DoubleConstant(n, 1.0 / n, 1.0 / n)


def centering_matrix(n: int) -> DoubleConstant:
    """Get the centering matrix C = M(1 - 1/n, -1/n)."""
    return DoubleConstant(n, 1.0 - 1.0 / n, -1.0 / n)


def eigenvalues(m: DoubleConstant) -> CanonicalForm:
    """Get the canonical (eigenvalue) form of a matrix.

    For n = 1 the major eigenvalue has multiplicity zero; it is still reported
    as a - t so that the conversion stays total, but only lambda_minor = a is
    spectrally meaningful.
    """
    return CanonicalForm(m.n, m.lambda_major, m.lambda_minor)


def from_eigenvalues(c: CanonicalForm) -> DoubleConstant:
    """Recover M(a, t) from its canonical form."""
    n = c.n
    a = (c.lambda_minor + (n - 1) * c.lambda_major) / n
    t = (c.lambda_minor - c.lambda_major) / n
    return DoubleConstant(n, a, t)


def eigenvalue_scale(m: DoubleConstant) -> float:
    """Get the magnitude scale against which an eigenvalue counts as zero."""
    return abs(m.a) + m.n * abs(m.t)


def is_negligible(m: DoubleConstant, value: float) -> bool:
    """Return True if an eigenvalue of m is zero up to closed-form round-off."""
    return abs(value) <= EIGENVALUE_RTOL * eigenvalue_scale(m)


def determinant(m: DoubleConstant) -> float:
    """Get det(M) = lambda_major^(n-1) · lambda_minor.

    Overflow follows IEEE semantics and returns an infinity.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        value = np.float64(m.lambda_major) ** (m.n - 1) * np.float64(m.lambda_minor)
    return float(value)


def char_poly(m: DoubleConstant, lam: float) -> float:
    """Evaluate the characteristic polynomial det(M - lam·I)."""
    with np.errstate(over="ignore", invalid="ignore"):
        value = np.float64(m.lambda_major - lam) ** (m.n - 1) * np.float64(
            m.lambda_minor - lam
        )
    return float(value)


def _validate_tolerance(tol: float) -> float:
    """Validate a zero tolerance."""
    tol = _as_float(tol)
    if not math.isfinite(tol) or tol < 0:
        raise InvalidParameterError(f"tol must be a finite nonnegative real, got {tol}")
    return tol


def classify(m: DoubleConstant, tol: float = DEFAULT_TOLERANCE) -> MatrixClass:
    """Classify a matrix by the signs of its eigenvalues.

    Zero tests are |value| <= tol. A 1×1 matrix never shows t, so it is
    classified by its single entry alone.
    """
    tol = _validate_tolerance(tol)

    if m.n == 1:
        return MatrixClass.ZERO if abs(m.a) <= tol else MatrixClass.SCALED_IDENTITY

    major = m.lambda_major
    minor = m.lambda_minor

    if abs(m.a) <= tol and abs(m.t) <= tol:
        return MatrixClass.ZERO
    if abs(major) <= tol:
        return MatrixClass.NON_ZERO_CONSTANT
    if abs(m.t) <= tol:
        return MatrixClass.SCALED_IDENTITY
    if abs(minor) <= tol:
        return MatrixClass.CENTERING_PROPORTIONAL
    if major > 0 and minor > 0:
        return MatrixClass.POSITIVE_DEFINITE
    if major < 0 and minor < 0:
        return MatrixClass.NEGATIVE_DEFINITE
    return MatrixClass.INDEFINITE


def is_proper(m: DoubleConstant, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Return True if a != t, i.e. the matrix is not a constant matrix."""
    return abs(m.lambda_major) > _validate_tolerance(tol)


def is_non_degenerate(m: DoubleConstant, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Return True if a != t and t != 0."""
    return is_proper(m, tol) and abs(m.t) > tol


def rank(m: DoubleConstant, tol: float = DEFAULT_TOLERANCE) -> int:
    """Get the rank of a matrix from its class."""
    label = classify(m, tol)
    if label == MatrixClass.ZERO:
        return 0
    if label == MatrixClass.NON_ZERO_CONSTANT:
        return 1
    if label == MatrixClass.CENTERING_PROPORTIONAL:
        return m.n - 1
    return m.n


def trace(m: DoubleConstant) -> float:
    """Get tr(M) = n·a."""
    return m.n * m.a


def materialize(m: DoubleConstant) -> DenseMatrix:
    """Build the dense n×n array of a matrix."""
    try:
        dense = np.full((m.n, m.n), m.t, dtype=np.float64)
    except (MemoryError, ValueError) as exc:
        _LOGGER.error("Unable to allocate a dense %d×%d matrix: %s", m.n, m.n, exc)
        raise InvalidParameterError(
            f"Dense materialization of n={m.n} exceeds available memory"
        ) from exc
    np.fill_diagonal(dense, m.a)
    return dense


def apply(m: DoubleConstant, x: ArrayLike) -> DenseMatrix:
    """Compute M·x without materializing M.

    ``x`` is a vector of length n or an n×k array; each column is mapped to
    (a - t)·x + t·sum(x).
    """
    values = np.asarray(x, dtype=np.float64)
    if values.ndim not in (1, 2) or values.shape[0] != m.n:
        raise DimensionMismatchError(
            f"Cannot apply an {m.n}×{m.n} matrix to an array of shape {values.shape}"
        )
    return m.lambda_major * values + m.t * values.sum(axis=0)


def decompose_in_basis(
    m: DoubleConstant, b1: DoubleConstant, b2: DoubleConstant
) -> tuple[float, float]:
    """Get weights (A, T) with M = A·b1 + T·b2 for a non-proportional basis."""
    if not m.n == b1.n == b2.n:
        raise DimensionMismatchError(
            f"Basis dimensions ({b1.n}, {b2.n}) do not match n={m.n}"
        )

    cross_1 = b1.a * b2.t
    cross_2 = b2.a * b1.t
    det = cross_1 - cross_2
    if det == 0 or abs(det) <= MACHINE_EPS * max(abs(cross_1), abs(cross_2)):
        raise ProportionalBasisError(
            f"Basis M({b1.a}, {b1.t}) and M({b2.a}, {b2.t}) is proportional"
        )

    weight_1 = (m.a * b2.t - b2.a * m.t) / det
    weight_2 = (b1.a * m.t - m.a * b1.t) / det
    return weight_1, weight_2


def decompose_canonical(m: DoubleConstant) -> tuple[float, float]:
    """Get the weights of M = lambda_major·C + lambda_minor·(1/n)."""
    return m.lambda_major, m.lambda_minor


def equicorrelation_limits(n: int) -> tuple[DoubleConstant, DoubleConstant]:
    """Get the lower and upper limits of the n×n equicorrelation matrix.

    The lower limit (rho -> -1/(n-1)) is n/(n-1)·C, the upper limit
    (rho -> 1) is the unit matrix.
    """
    if n < 2:
        raise InvalidParameterError(
            f"Equicorrelation limits need n >= 2, got n={n}"
        )
    return DoubleConstant(n, 1.0, -1.0 / (n - 1)), DoubleConstant(n, 1.0, 1.0)


def equicorrelation_limit_weights(m: DoubleConstant) -> tuple[float, float]:
    """Get the weights of M over the limiting equicorrelation matrices."""
    return (m.n - 1) / m.n * m.lambda_major, m.lambda_minor / m.n
