"""Statistics with the centering and equicorrelation matrices.

Centering is multiplication by C = M(1 - 1/n, -1/n) and is computed by mean
subtraction. The equicorrelation matrix M(1, rho) is the variance matrix of
the equicorrelated model V(X) = sigma^2·M(1, rho); its principal root is the
"root matrix" used to simulate that model.
"""

from __future__ import annotations

from collections.abc import Sequence
import itertools
import logging
import math
from typing import Any
import warnings

import attr
import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from .algebra import Partition, centering_block_weights
from .const import (
    RANK_PIVOT_RTOL,
    RHO_LOWER_BOUND,
    RHO_UPPER_BOUND,
    SS_CLAMP_TOLERANCE,
    SS_IDENTITY_RTOL,
)
from .core import DenseMatrix, DoubleConstant, apply
from .exceptions import (
    DimensionMismatchError,
    DomainError,
    EmptyInputError,
    EquicorrelationRangeError,
    InsufficientDataError,
    InternalConsistencyError,
    InvalidParameterError,
    RankDeficientError,
)
from .fourier import unitary_dft

_LOGGER: logging.Logger = logging.getLogger(__name__)


def _as_vector(x: ArrayLike, label: str = "x") -> NDArray[np.float64]:
    values = np.asarray(x, dtype=np.float64)
    if values.ndim != 1:
        raise DimensionMismatchError(
            f"{label} must be a vector, got shape {values.shape}"
        )
    if values.size == 0:
        raise EmptyInputError(f"{label} is empty")
    return values


def _as_matrix(x: ArrayLike) -> NDArray[np.float64]:
    values = np.asarray(x, dtype=np.float64)
    if values.ndim == 1:
        values = values[:, np.newaxis]
    if values.ndim != 2:
        raise DimensionMismatchError(f"Expected a matrix, got shape {values.shape}")
    if values.size == 0:
        raise EmptyInputError(f"Matrix of shape {values.shape} is empty")
    return values


def _as_design(x: ArrayLike, n: int) -> NDArray[np.float64]:
    """Shape explanatory data as an n×m design; a vector is one column."""
    values = np.asarray(x, dtype=np.float64)
    if values.ndim == 1:
        values = values[:, np.newaxis]
    if values.ndim != 2 or values.shape[0] != n:
        raise DimensionMismatchError(
            f"Design must have {n} rows, got shape {values.shape}"
        )
    return values


def center_columns(x: ArrayLike) -> DenseMatrix:
    """Compute C_n·x: subtract each column's mean.

    A vector is treated as a single column and returned as a vector.
    """
    values = np.asarray(x, dtype=np.float64)
    matrix = _as_matrix(values)
    centered = matrix - matrix.mean(axis=0)
    return centered.reshape(values.shape)


def center_rows(x: ArrayLike) -> DenseMatrix:
    """Compute x·C_m: subtract each row's mean."""
    values = np.asarray(x, dtype=np.float64)
    matrix = _as_matrix(values)
    if values.ndim == 1:
        matrix = matrix.T
    centered = matrix - matrix.mean(axis=1, keepdims=True)
    return centered.reshape(values.shape)


def double_center(x: ArrayLike) -> DenseMatrix:
    """Compute C_n·x·C_m: x_ij - row mean_i - column mean_j + grand mean."""
    values = np.asarray(x, dtype=np.float64)
    matrix = _as_matrix(values)
    centered = (
        matrix
        - matrix.mean(axis=1, keepdims=True)
        - matrix.mean(axis=0, keepdims=True)
        + matrix.mean()
    )
    return centered.reshape(values.shape)


def sum_of_squares(x: ArrayLike) -> float:
    """Compute sum (x_i - mean)^2 = x'·C·x."""
    deviations = center_columns(_as_vector(x))
    return float(deviations @ deviations)


def cross_products(x: ArrayLike, y: ArrayLike) -> float:
    """Compute sum (x_i - mean x)(y_i - mean y) = x'·C·y."""
    xs = _as_vector(x, "x")
    ys = _as_vector(y, "y")
    if xs.size != ys.size:
        raise DimensionMismatchError(f"x has length {xs.size}, y has length {ys.size}")
    return float(center_columns(xs) @ center_columns(ys))


def mahalanobis_sq(x: ArrayLike, sigma_inverse: ArrayLike) -> float:
    """Compute D^2(x) = (x - mean)'·inv(Sigma)·(x - mean)."""
    deviations = center_columns(_as_vector(x))
    precision = np.asarray(sigma_inverse, dtype=np.float64)
    n = deviations.size
    if precision.shape != (n, n):
        raise DimensionMismatchError(
            f"sigma_inverse must be {n}×{n}, got shape {precision.shape}"
        )
    return float(deviations @ precision @ deviations)


def mahalanobis_sq_spectral(x: ArrayLike, sigma: ArrayLike) -> float:
    """Compute D^2(x) as x'·A_c·inv(V)·A_c'·x.

    Sigma = A·V·A' is the eigendecomposition of Sigma and A_c = C·A its
    centered eigenvector matrix.
    """
    values = _as_vector(x)
    covariance = np.asarray(sigma, dtype=np.float64)
    n = values.size
    if covariance.shape != (n, n):
        raise DimensionMismatchError(
            f"sigma must be {n}×{n}, got shape {covariance.shape}"
        )

    eigenvalues, eigenvectors = linalg.eigh(covariance)
    if eigenvalues[0] <= 0:
        _LOGGER.error("Covariance has nonpositive eigenvalue %s", eigenvalues[0])
        raise DomainError(
            "sigma must be positive definite", "sigma", float(eigenvalues[0])
        )
    scores = center_columns(eigenvectors).T @ values
    return float(np.sum(scores**2 / eigenvalues))


def centered_least_squares(y: ArrayLike, x: ArrayLike) -> NDArray[np.float64]:
    """Solve (x_c'·x_c)·beta = x_c'·y for the centered design x_c = C·x."""
    response = _as_vector(y, "y")
    design = _as_design(x, response.size)
    n, m = design.shape
    if m == 0:
        return np.zeros(0, dtype=np.float64)
    if n < m + 1:
        raise RankDeficientError(f"{m} explanatory columns need at least {m + 1} rows")

    centered = center_columns(design)
    gram = centered.T @ centered
    rhs = centered.T @ center_columns(response)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu, pivots = linalg.lu_factor(gram)

    largest = float(np.max(np.abs(np.diag(gram))))
    smallest_pivot = float(np.min(np.abs(np.diag(lu))))
    if largest == 0 or smallest_pivot < RANK_PIVOT_RTOL * largest:
        _LOGGER.error(
            "Centered design is rank deficient: pivot %s against diagonal %s",
            smallest_pivot,
            largest,
        )
        raise RankDeficientError("Centered design does not have full column rank")
    return np.asarray(linalg.lu_solve((lu, pivots), rhs), dtype=np.float64)


def annihilator_residuals(y: ArrayLike, x: ArrayLike | None = None) -> DenseMatrix:
    """Compute (I - H)·y = C·y - x_c·inv(x_c'·x_c)·x_c'·y.

    H is the hat matrix of the design [1 x]; without explanatory columns the
    residuals are the centered response.
    """
    response = _as_vector(y, "y")
    if x is None:
        return center_columns(response)
    design = _as_design(x, response.size)
    if design.shape[1] == 0:
        return center_columns(response)
    beta = centered_least_squares(response, design)
    return center_columns(response) - center_columns(design) @ beta


def fourier_normal_equations_gap(
    beta_hat: ArrayLike, x: ArrayLike, y: ArrayLike
) -> float:
    """Get the largest gap between the two sides of the Fourier normal equations.

    For each explanatory column i compares
    Re sum_{r>=1} (sum_k beta_k·F_xk(r))·conj(F_xi(r)) against
    Re sum_{r>=1} F_xi(r)·conj(F_y(r)).
    """
    response = _as_vector(y, "y")
    design = _as_design(x, response.size)
    beta = np.asarray(beta_hat, dtype=np.float64).reshape(-1)
    if beta.size != design.shape[1]:
        raise DimensionMismatchError(
            f"beta_hat has {beta.size} entries for {design.shape[1]} columns"
        )
    if beta.size == 0:
        return 0.0

    u = unitary_dft(response.size)
    fx = u.forward(design)[1:]
    fy = u.forward(response)[1:]
    lhs = ((fx @ beta)[:, np.newaxis] * np.conj(fx)).sum(axis=0).real
    rhs = (fx * np.conj(fy)[:, np.newaxis]).sum(axis=0).real
    return float(np.max(np.abs(lhs - rhs)))


def degrees_of_freedom(n: int) -> int:
    """Get DF = rank(C_n) = n - 1."""
    if n < 1:
        raise InvalidParameterError(f"n must be at least 1, got {n}")
    return n - 1


def sample_variance(x: ArrayLike) -> float:
    """Compute the Bessel-corrected sample variance."""
    values = _as_vector(x)
    if values.size < 2:
        raise InsufficientDataError(
            f"Sample variance needs at least 2 observations, got {values.size}"
        )
    return sum_of_squares(values) / degrees_of_freedom(values.size)


def _rho_lower_bound(n: int) -> float:
    return -1.0 / (n - 1) if n > 1 else -math.inf


@attr.s(frozen=True, slots=True, auto_attribs=True)
class Equicorrelation:
    """Equicorrelation M(1, rho) with -1/(n-1) < rho < 1."""

    n: int = attr.ib()
    rho: float = attr.ib(converter=float)

    @n.validator
    def _check_n(self, attribute: Any, value: int) -> None:
        if value < 1:
            raise InvalidParameterError(f"n must be at least 1, got {value}")

    @rho.validator
    def _check_rho(self, attribute: Any, value: float) -> None:
        if not math.isfinite(value):
            raise InvalidParameterError(f"rho must be finite, got {value}")
        if value >= 1:
            _LOGGER.error("rho = %s violates the upper bound 1", value)
            raise EquicorrelationRangeError(
                f"rho = {value} must be below the upper bound 1", RHO_UPPER_BOUND, value
            )
        lower = _rho_lower_bound(self.n)
        if value <= lower:
            _LOGGER.error("rho = %s violates the lower bound %s", value, lower)
            raise EquicorrelationRangeError(
                f"rho = {value} must be above the lower bound -1/(n-1) = {lower}",
                RHO_LOWER_BOUND,
                value,
            )

    @property
    def matrix(self) -> DoubleConstant:
        """Return the variance matrix M(1, rho)."""
        return DoubleConstant(self.n, 1.0, self.rho)


def equicorrelation(n: int, rho: float) -> Equicorrelation:
    """Construct a validated equicorrelation."""
    return Equicorrelation(n, rho)


def equicorrelation_forms(
    e: Equicorrelation,
) -> tuple[DoubleConstant, DoubleConstant, DoubleConstant, DoubleConstant]:
    """Get the variance matrix, its root, its inverse and the inverse root.

    With lambda_major = 1 - rho and lambda_minor = 1 - rho + n·rho:
    root = sqrt(lambda_major)·I + (sqrt(lambda_minor) - sqrt(lambda_major))/n·1
    and inverse = I/(1 - rho) - rho/((1 - rho)(1 - rho + n·rho))·1.
    """
    n, rho = e.n, e.rho
    major = 1.0 - rho
    minor = 1.0 - rho + n * rho
    root_major, root_minor = math.sqrt(major), math.sqrt(minor)

    sigma2 = DoubleConstant(n, 1.0, rho)
    root_t = (root_minor - root_major) / n
    sigma = DoubleConstant(n, root_major + root_t, root_t)
    inverse_t = -rho / (major * minor)
    sigma2_inv = DoubleConstant(n, 1.0 / major + inverse_t, inverse_t)
    inverse_root_t = (1.0 / root_minor - 1.0 / root_major) / n
    sigma_inv = DoubleConstant(n, 1.0 / root_major + inverse_root_t, inverse_root_t)
    return sigma2, sigma, sigma2_inv, sigma_inv


def mahalanobis_sq_equicorrelated(x: ArrayLike, e: Equicorrelation) -> float:
    """Compute D^2(x) under the equicorrelation variance matrix."""
    deviations = center_columns(_as_vector(x))
    if deviations.size != e.n:
        raise DimensionMismatchError(f"x has length {deviations.size}, expected {e.n}")
    _, _, sigma2_inv, _ = equicorrelation_forms(e)
    return float(deviations @ apply(sigma2_inv, deviations))


@attr.s(frozen=True, slots=True, auto_attribs=True)
class DfReport:
    """Degrees of freedom and variance estimate for a sample.

    ``df_eff`` = (1 - rho)·df is the unbiased divisor under the equicorrelated
    model. ``df_eff_squared`` = (1 - rho)^2·df is the squared-factor variant,
    kept for comparison only.
    """

    n: int
    df: int
    df_eff: float
    n_eff: float
    df_eff_squared: float
    n_eff_squared: float
    rho: float | None = None
    ss: float | None = None
    variance_estimate: float | None = None


def effective_df(n: int, rho: float) -> DfReport:
    """Get effective degrees of freedom and sample size under equicorrelation."""
    if n < 2:
        raise InsufficientDataError(f"Effective DF needs n >= 2, got n={n}")
    e = equicorrelation(n, rho)
    df = degrees_of_freedom(n)
    df_eff = (1.0 - e.rho) * df
    df_eff_squared = (1.0 - e.rho) ** 2 * df
    _LOGGER.debug(
        "n=%d rho=%s: df_eff=%s, df_eff_squared=%s", n, rho, df_eff, df_eff_squared
    )
    return DfReport(
        n=n,
        df=df,
        df_eff=df_eff,
        n_eff=1.0 + df_eff,
        df_eff_squared=df_eff_squared,
        n_eff_squared=1.0 + df_eff_squared,
        rho=e.rho,
    )


def adjusted_sample_variance(x: ArrayLike, rho: float) -> float:
    """Compute ||X - mean||^2 / df_eff."""
    values = _as_vector(x)
    report = effective_df(values.size, rho)
    return sum_of_squares(values) / report.df_eff


def variance_report(x: ArrayLike, rho: float | None = None) -> DfReport:
    """Build the degrees-of-freedom report and variance estimate of a sample."""
    values = _as_vector(x)
    n = values.size
    if n < 2:
        raise InsufficientDataError(
            f"Variance estimation needs at least 2 observations, got {n}"
        )
    ss = sum_of_squares(values)
    if rho is None:
        df = degrees_of_freedom(n)
        return DfReport(
            n=n,
            df=df,
            df_eff=float(df),
            n_eff=float(n),
            df_eff_squared=float(df),
            n_eff_squared=float(n),
            ss=ss,
            variance_estimate=ss / df,
        )
    report = effective_df(n, rho)
    return attr.evolve(report, ss=ss, variance_estimate=ss / report.df_eff)


@attr.s(frozen=True, slots=True, auto_attribs=True)
class SsDecomposition:
    """Pooled sum of squares split into group terms and a between-group term."""

    pooled_ss: float
    group_ss: tuple[float, ...]
    between_term: float
    group_sizes: Partition
    between_term_weighted: float

    @property
    def identity_residual(self) -> float:
        """Return |pooled - (sum of group terms + weighted between term)|."""
        return abs(
            self.pooled_ss - math.fsum((*self.group_ss, self.between_term_weighted))
        )


def two_group_between_term(x1: ArrayLike, x2: ArrayLike) -> float:
    """Compute n1·n2/(n1 + n2)·(mean1 - mean2)^2."""
    first = _as_vector(x1, "x1")
    second = _as_vector(x2, "x2")
    n1, n2 = first.size, second.size
    return n1 * n2 / (n1 + n2) * float(first.mean() - second.mean()) ** 2


def _weighted_between_term(sums: Sequence[float], partition: Partition) -> float:
    """Compute (1/n)[sum w_l·S_l^2 - sum_{l != h} S_l·S_h].

    The group sums S_l must be taken about the grand mean.
    """
    weights = centering_block_weights(partition)
    squares = [w * s * s for w, s in zip(weights, sums)]
    crosses = [2.0 * s * r for s, r in itertools.combinations(sums, 2)]
    return (math.fsum(squares) - math.fsum(crosses)) / partition.n


def pooled_ss_decomposition(groups: Sequence[ArrayLike]) -> SsDecomposition:
    """Decompose the pooled sum of squares of concatenated groups."""
    if not groups:
        raise EmptyInputError("Expected at least one group")
    samples = []
    for index, group in enumerate(groups):
        values = np.asarray(group, dtype=np.float64).reshape(-1)
        if values.size == 0:
            _LOGGER.error("Group %d is empty", index + 1)
            raise EmptyInputError(f"Group {index + 1} is empty")
        samples.append(values)

    partition = Partition(tuple(values.size for values in samples))
    pooled = sum_of_squares(np.concatenate(samples))
    group_ss = tuple(sum_of_squares(values) for values in samples)
    between = pooled - math.fsum(group_ss)

    if between < 0:
        if between < -SS_CLAMP_TOLERANCE * max(1.0, pooled):
            _LOGGER.error("Between-group term %s is negative", between)
            raise InternalConsistencyError(f"Between-group term {between} is negative")
        between = 0.0

    # the between term is invariant under a common shift
    grand_mean = math.fsum(np.concatenate(samples)) / partition.n
    weighted = _weighted_between_term(
        [math.fsum(values - grand_mean) for values in samples], partition
    )
    if abs(between - weighted) > SS_IDENTITY_RTOL * max(1.0, pooled):
        _LOGGER.error("Between-group terms disagree: %s vs %s", between, weighted)
        raise InternalConsistencyError(
            f"Between-group term {between} disagrees with weighted form {weighted}"
        )

    return SsDecomposition(
        pooled_ss=pooled,
        group_ss=group_ss,
        between_term=between,
        group_sizes=partition,
        between_term_weighted=weighted,
    )
