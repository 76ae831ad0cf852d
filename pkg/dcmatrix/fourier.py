"""Fourier view of double-constant matrices.

Every double-constant matrix is diagonalized by the unitary DFT matrix
U[j, k] = w^(j·k)/sqrt(n), w = exp(-2·pi·i/n): M = U·diag(L)·conj(U) with
L = (lambda_minor, lambda_major, ..., lambda_major). Applying M is scaling
the zero frequency by lambda_minor and every other frequency by lambda_major.

Transforms are direct O(n^2) sums; this module backs verification and
moderate n.
"""

from __future__ import annotations

import logging

import attr
import numpy as np
from numpy.typing import ArrayLike, NDArray

from .const import GEOMETRIC_SUM_TOLERANCE, IMAGINARY_RESIDUE_TOLERANCE
from .core import DenseMatrix, DoubleConstant
from .exceptions import (
    DimensionMismatchError,
    EmptyInputError,
    ImaginaryResidueError,
    InternalConsistencyError,
    InvalidParameterError,
)

_LOGGER: logging.Logger = logging.getLogger(__name__)

ComplexVector = NDArray[np.complex128]


def _twiddles(n: int) -> NDArray[np.complex128]:
    """Build the n×n unitary DFT matrix."""
    index = np.arange(n)
    # reduce j·k mod n so entry (j, k) and (k, j) share one exponent
    exponent = np.outer(index, index) % n
    return np.exp(-2j * np.pi * exponent / n) / np.sqrt(n)


@attr.s(frozen=True, slots=True, eq=False)
class UnitaryDFT:
    """The n×n unitary DFT matrix."""

    n: int = attr.ib()
    entries: NDArray[np.complex128] = attr.ib(repr=False)

    def forward(self, x: ArrayLike) -> NDArray[np.complex128]:
        """Transform a vector, or each column of an n×k array."""
        return self.entries @ _check_rows(self.n, x)

    def inverse(self, spectrum: ArrayLike) -> NDArray[np.complex128]:
        """Invert forward."""
        return np.conj(self.entries) @ _check_rows(self.n, spectrum)


def _check_rows(n: int, x: ArrayLike) -> NDArray:
    values = np.asarray(x)
    if values.ndim not in (1, 2) or values.shape[0] != n:
        raise DimensionMismatchError(f"Expected {n} rows, got shape {values.shape}")
    return values


def unitary_dft(n: int) -> UnitaryDFT:
    """Build the unitary DFT matrix of size n."""
    if n < 1:
        raise InvalidParameterError(f"DFT size must be at least 1, got {n}")
    return UnitaryDFT(n, _twiddles(n))


def dft(x: ArrayLike) -> ComplexVector:
    """Compute the unitary DFT F_x(r) = sum_s x[s]·exp(-2·pi·i·r·s/n)/sqrt(n)."""
    values = np.asarray(x, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise EmptyInputError(f"Expected a nonempty vector, got shape {values.shape}")
    return unitary_dft(values.size).forward(values)


def idft(spectrum: ArrayLike) -> ComplexVector:
    """Compute the inverse unitary DFT."""
    values = np.asarray(spectrum, dtype=np.complex128)
    if values.ndim != 1 or values.size == 0:
        raise EmptyInputError(f"Expected a nonempty vector, got shape {values.shape}")
    return unitary_dft(values.size).inverse(values)


def geometric_sum(n: int, r: int) -> float:
    """Compute (1/n)·sum_k exp(-2·pi·i·r·k/n), the indicator of r mod n = 0."""
    if n < 1:
        raise InvalidParameterError(f"n must be at least 1, got {n}")
    residue = int(r) % n
    k = np.arange(n)
    total = np.exp(-2j * np.pi * ((residue * k) % n) / n).sum() / n
    indicator = 1.0 if residue == 0 else 0.0
    if abs(total - indicator) > GEOMETRIC_SUM_TOLERANCE:
        _LOGGER.error("Geometric sum for n=%d, r=%d is %s", n, r, total)
        raise InternalConsistencyError(
            f"Geometric sum for n={n}, r={r} deviates from {indicator}: {total}"
        )
    return indicator


def spectrum(m: DoubleConstant) -> NDArray[np.float64]:
    """Get the diagonal (lambda_minor, lambda_major, ..., lambda_major)."""
    values = np.full(m.n, m.lambda_major, dtype=np.float64)
    values[0] = m.lambda_minor
    return values


def diagonalize(m: DoubleConstant) -> tuple[UnitaryDFT, NDArray[np.float64]]:
    """Get (U, L) with M = U·diag(L)·conj(U)."""
    return unitary_dft(m.n), spectrum(m)


def _real_part(values: NDArray[np.complex128], scale: float) -> NDArray[np.float64]:
    """Drop an imaginary residue that is negligible against scale."""
    residue = float(np.max(np.abs(values.imag), initial=0.0))
    if residue > IMAGINARY_RESIDUE_TOLERANCE * max(1.0, scale):
        _LOGGER.error("Imaginary residue %s exceeds tolerance", residue)
        raise ImaginaryResidueError(f"Imaginary residue {residue} exceeds tolerance")
    return np.ascontiguousarray(values.real)


def reconstruct(u: UnitaryDFT, lambdas: ArrayLike) -> DenseMatrix:
    """Compute U·diag(L)·conj(U) as a real dense matrix."""
    diag = np.asarray(lambdas, dtype=np.float64)
    if diag.shape != (u.n,):
        raise DimensionMismatchError(
            f"Expected {u.n} eigenvalues, got shape {diag.shape}"
        )
    dense = (u.entries * diag) @ np.conj(u.entries)
    return _real_part(dense, float(np.max(np.abs(diag), initial=0.0)))


def apply_via_fourier(m: DoubleConstant, x: ArrayLike) -> DenseMatrix:
    """Compute M·x by scaling the Fourier coefficients of each column."""
    values = np.asarray(x, dtype=np.float64)
    u = unitary_dft(m.n)
    coefficients = u.forward(values)
    scale = spectrum(m)
    if coefficients.ndim == 2:
        scale = scale[:, np.newaxis]
    result = u.inverse(coefficients * scale)
    magnitude = float(np.max(np.abs(values), initial=0.0)) * (abs(m.a) + m.n * abs(m.t))
    return _real_part(result, magnitude)


def _check_vector(n: int, x: ArrayLike, label: str) -> NDArray[np.float64]:
    values = np.asarray(x, dtype=np.float64)
    if values.shape != (n,):
        raise DimensionMismatchError(
            f"{label} must have length {n}, got {values.shape}"
        )
    return values


def parseval_product(
    m1: DoubleConstant, m2: DoubleConstant, x: ArrayLike, y: ArrayLike
) -> float:
    """Compute (M1·x)·(M2·y) in the Fourier domain."""
    if m1.n != m2.n:
        raise DimensionMismatchError(f"Matrices have dimensions {m1.n} and {m2.n}")
    n = m1.n
    fx = dft(_check_vector(n, x, "x"))
    fy = dft(_check_vector(n, y, "y"))
    terms = fx * np.conj(fy)
    value = (
        m1.lambda_minor * m2.lambda_minor * terms[0]
        + m1.lambda_major * m2.lambda_major * terms[1:].sum()
    )
    return float(value.real)


def plancherel_norm(m: DoubleConstant, x: ArrayLike) -> float:
    """Compute ||M·x||^2 in the Fourier domain."""
    fx = dft(_check_vector(m.n, x, "x"))
    energy = np.abs(fx) ** 2
    return float(
        m.lambda_minor**2 * energy[0] + m.lambda_major**2 * energy[1:].sum()
    )
