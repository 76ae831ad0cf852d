"""Dense reference implementations.

Textbook algorithms on full arrays, used to check the structured results.
Nothing here imports the structured modules (core, algebra, fourier, stats).
"""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg, special

from .const import (
    MACHINE_EPS,
    MIN_MONTE_CARLO_TRIALS,
    RHO_LOWER_BOUND,
    RHO_UPPER_BOUND,
    SOLVE_PIVOT_RTOL,
)
from .exceptions import (
    DimensionMismatchError,
    EquicorrelationRangeError,
    InvalidParameterError,
    SingularMatrixError,
)

_LOGGER: logging.Logger = logging.getLogger(__name__)

_TAYLOR_TERMS = 20
_UNIFORM_SHIFT = np.uint64(11)
_UNIFORM_SCALE = 2.0**-53


def _square(a: ArrayLike) -> NDArray[np.float64]:
    matrix = np.array(a, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatchError(
            f"Expected a square matrix, got shape {matrix.shape}"
        )
    return matrix


def dense_matmul(a: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    """Multiply two matrices by summing products over the inner index."""
    left = np.asarray(a, dtype=np.float64)
    right = np.asarray(b, dtype=np.float64)
    if left.ndim != 2 or right.ndim != 2 or left.shape[1] != right.shape[0]:
        raise DimensionMismatchError(
            f"Cannot multiply shapes {left.shape} and {right.shape}"
        )
    return (left[:, :, np.newaxis] * right[np.newaxis, :, :]).sum(axis=1)


def dense_det(a: ArrayLike) -> float:
    """Compute det(a) by LU decomposition with partial pivoting."""
    work = _square(a)
    n = work.shape[0]
    det = 1.0
    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(work[col:, col])))
        pivot = work[pivot_row, col]
        if pivot == 0:
            return 0.0
        if pivot_row != col:
            work[[col, pivot_row]] = work[[pivot_row, col]]
            det = -det
        det *= pivot
        factors = work[col + 1 :, col] / pivot
        work[col + 1 :, col:] -= np.outer(factors, work[col, col:])
    return float(det)


def dense_solve(a: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    """Solve a·x = b by Gaussian elimination with partial pivoting."""
    work = _square(a)
    n = work.shape[0]
    rhs = np.array(b, dtype=np.float64)
    if rhs.shape[0] != n:
        raise DimensionMismatchError(
            f"Right-hand side has {rhs.shape[0]} rows, expected {n}"
        )
    vector = rhs.ndim == 1
    if vector:
        rhs = rhs[:, np.newaxis]

    tolerance = SOLVE_PIVOT_RTOL * float(np.max(np.abs(work), initial=0.0))
    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(work[col:, col])))
        pivot = work[pivot_row, col]
        if abs(pivot) <= tolerance:
            _LOGGER.error("Pivot %s in column %d is below %s", pivot, col, tolerance)
            raise SingularMatrixError(
                f"Matrix is singular at column {col}", "pivot", float(pivot)
            )
        if pivot_row != col:
            work[[col, pivot_row]] = work[[pivot_row, col]]
            rhs[[col, pivot_row]] = rhs[[pivot_row, col]]
        factors = work[col + 1 :, col] / pivot
        work[col + 1 :, col:] -= np.outer(factors, work[col, col:])
        rhs[col + 1 :] -= np.outer(factors, rhs[col])

    solution = np.zeros_like(rhs)
    for row in range(n - 1, -1, -1):
        solution[row] = (rhs[row] - work[row, row + 1 :] @ solution[row + 1 :]) / work[
            row, row
        ]
    return solution[:, 0] if vector else solution


def dense_inverse(a: ArrayLike) -> NDArray[np.float64]:
    """Invert a by eliminating against the identity."""
    matrix = _square(a)
    return dense_solve(matrix, np.eye(matrix.shape[0]))


def dense_rank(a: ArrayLike, tol: float | None = None) -> int:
    """Count the pivots of the row echelon form above tol."""
    work = np.array(a, dtype=np.float64)
    if work.ndim != 2:
        raise DimensionMismatchError(f"Expected a matrix, got shape {work.shape}")
    rows, cols = work.shape
    if tol is None:
        tol = max(rows, cols) * MACHINE_EPS * float(np.max(np.abs(work), initial=0.0))

    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivot_row = rank + int(np.argmax(np.abs(work[rank:, col])))
        if abs(work[pivot_row, col]) <= tol:
            continue
        work[[rank, pivot_row]] = work[[pivot_row, rank]]
        factors = work[rank + 1 :, col] / work[rank, col]
        work[rank + 1 :, col:] -= np.outer(factors, work[rank, col:])
        rank += 1
    return rank


def dense_expm(a: ArrayLike) -> NDArray[np.float64]:
    """Compute exp(a) by scaling and squaring a truncated Taylor series."""
    matrix = _square(a)
    norm = float(np.max(np.abs(matrix).sum(axis=1), initial=0.0))
    squarings = max(0, math.ceil(math.log2(norm))) + 1 if norm > 0 else 0
    scaled = matrix / 2.0**squarings

    result = np.eye(matrix.shape[0])
    term = np.eye(matrix.shape[0])
    for k in range(1, _TAYLOR_TERMS + 1):
        term = term @ scaled / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def dense_equicorrelation(n: int, rho: float) -> NDArray[np.float64]:
    """Build the dense n×n matrix with unit diagonal and rho elsewhere."""
    matrix = np.full((n, n), float(rho))
    np.fill_diagonal(matrix, 1.0)
    return matrix


def _check_rho(n: int, rho: float) -> None:
    if not rho < 1:
        raise EquicorrelationRangeError(
            f"rho = {rho} must be below 1", RHO_UPPER_BOUND, rho
        )
    if n > 1 and not rho > -1.0 / (n - 1):
        raise EquicorrelationRangeError(
            f"rho = {rho} must be above -1/(n-1)", RHO_LOWER_BOUND, rho
        )


def uniforms(seed: int, count: int) -> NDArray[np.float64]:
    """Draw count uniforms in (0, 1) from the Philox stream keyed by seed.

    Each raw 64-bit draw r maps to ((r >> 11) + 0.5)·2^-53.
    """
    bit_generator = np.random.Philox(key=seed)
    raw = bit_generator.random_raw(count)
    return ((raw >> _UNIFORM_SHIFT).astype(np.float64) + 0.5) * _UNIFORM_SCALE


def equicorrelated_samples(
    n: int,
    sigma: float,
    rho: float,
    trials: int,
    seed: int,
    mu: float = 0.0,
) -> NDArray[np.float64]:
    """Draw trials×n samples X = mu·1 + sigma·root·e of the equicorrelated model.

    ``root`` is the principal square root of the dense equicorrelation matrix
    and e is standard normal by inverse CDF; trial i uses raw draws
    [i·n, (i+1)·n).
    """
    if n < 1 or trials < 1:
        raise InvalidParameterError(f"Need n >= 1 and trials >= 1, got {n}, {trials}")
    if sigma < 0:
        raise InvalidParameterError(f"sigma must be nonnegative, got {sigma}")
    _check_rho(n, rho)

    eigenvalues, eigenvectors = linalg.eigh(dense_equicorrelation(n, rho))
    root = (eigenvectors * np.sqrt(np.clip(eigenvalues, 0.0, None))) @ eigenvectors.T
    normals = special.ndtri(uniforms(seed, trials * n)).reshape(trials, n)
    return mu + sigma * normals @ root


def monte_carlo_mean_ss(
    n: int, sigma: float, rho: float, trials: int, seed: int
) -> tuple[float, float]:
    """Estimate E||X - mean(X)||^2 under the equicorrelated model.

    Returns the sample mean over trials and its standard error.
    """
    if trials < MIN_MONTE_CARLO_TRIALS:
        raise InvalidParameterError(
            f"Monte Carlo needs at least {MIN_MONTE_CARLO_TRIALS} trials, got {trials}"
        )
    samples = equicorrelated_samples(n, sigma, rho, trials, seed)
    deviations = samples - samples.mean(axis=1, keepdims=True)
    ss = (deviations**2).sum(axis=1)
    mean = float(ss.mean())
    stderr = float(ss.std(ddof=1) / math.sqrt(trials))
    _LOGGER.debug("Monte Carlo n=%d rho=%s: mean=%s stderr=%s", n, rho, mean, stderr)
    return mean, stderr
