"""Test centering, regression and equicorrelation statistics."""

from __future__ import annotations

import math

import numpy as np
import pytest

from dcmatrix import core, oracle, stats
from dcmatrix.const import RHO_LOWER_BOUND, RHO_UPPER_BOUND
from dcmatrix.exceptions import (
    DimensionMismatchError,
    DomainError,
    EmptyInputError,
    EquicorrelationRangeError,
    InsufficientDataError,
    RankDeficientError,
)

from . import (
    TEST_BETWEEN_TERM,
    TEST_GROUP_SS,
    TEST_GROUPS,
    TEST_POOLED_SS,
    TEST_RHO,
    TEST_SAMPLE,
    TEST_SEED,
    dense,
)

UNBIASED_TRIALS = 100_000
UNBIASED_BAND = 3.0


def test_center_columns() -> None:
    """Test column centering of matrices and vectors."""
    np.testing.assert_array_equal(
        stats.center_columns([[1.0, 2.0], [3.0, 6.0]]), [[-1.0, -2.0], [1.0, 2.0]]
    )
    np.testing.assert_array_equal(stats.center_columns(TEST_SAMPLE), [-1.0, 0.0, 1.0])
    with pytest.raises(EmptyInputError):
        stats.center_columns(np.zeros((0, 2)))


def test_center_rows() -> None:
    """Test row centering."""
    np.testing.assert_array_equal(
        stats.center_rows([[1.0, 3.0], [2.0, 6.0]]), [[-1.0, 1.0], [-2.0, 2.0]]
    )
    np.testing.assert_array_equal(stats.center_rows(TEST_SAMPLE), [-1.0, 0.0, 1.0])


def test_double_center(rng: np.random.Generator) -> None:
    """Test C_n·x·C_m against the dense centering matrices."""
    x = rng.normal(size=(4, 3))
    c_rows = core.materialize(core.centering_matrix(4))
    c_cols = core.materialize(core.centering_matrix(3))
    centered = stats.double_center(x)
    np.testing.assert_allclose(centered, c_rows @ x @ c_cols, atol=1e-12)
    np.testing.assert_allclose(centered.sum(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(centered.sum(axis=1), 0.0, atol=1e-12)


def test_sums_of_squares() -> None:
    """Test the sum of squares and cross products."""
    assert stats.sum_of_squares(TEST_SAMPLE) == 2.0
    assert stats.cross_products(TEST_SAMPLE, [2.0, 4.0, 7.0]) == pytest.approx(5.0)
    with pytest.raises(DimensionMismatchError):
        stats.cross_products(TEST_SAMPLE, [1.0, 2.0])
    with pytest.raises(EmptyInputError):
        stats.sum_of_squares([])


def test_mahalanobis(rng: np.random.Generator) -> None:
    """Test the direct and spectral Mahalanobis distances agree."""
    factor = rng.normal(size=(5, 5))
    sigma = factor @ factor.T + 5.0 * np.eye(5)
    x = rng.normal(size=5)
    direct = stats.mahalanobis_sq(x, np.linalg.inv(sigma))
    assert stats.mahalanobis_sq_spectral(x, sigma) == pytest.approx(direct)

    with pytest.raises(DimensionMismatchError):
        stats.mahalanobis_sq(x, np.eye(4))
    with pytest.raises(DomainError):
        stats.mahalanobis_sq_spectral(x, -np.eye(5))


def test_mahalanobis_equicorrelated(rng: np.random.Generator) -> None:
    """Test the structured distance against the dense inverse."""
    e = stats.equicorrelation(6, 0.3)
    x = rng.normal(size=6)
    expected = stats.mahalanobis_sq(x, np.linalg.inv(dense(6, 1.0, 0.3)))
    assert stats.mahalanobis_sq_equicorrelated(x, e) == pytest.approx(expected)
    with pytest.raises(DimensionMismatchError):
        stats.mahalanobis_sq_equicorrelated(np.ones(5), e)


def test_centered_least_squares(rng: np.random.Generator) -> None:
    """Test that an exact linear model is recovered."""
    x = rng.normal(size=(12, 2))
    y = 3.0 + 2.0 * x[:, 0] - x[:, 1]
    np.testing.assert_allclose(
        stats.centered_least_squares(y, x), [2.0, -1.0], atol=1e-10
    )
    np.testing.assert_allclose(stats.annihilator_residuals(y, x), 0.0, atol=1e-10)


def test_centered_least_squares_rank_deficient(rng: np.random.Generator) -> None:
    """Test duplicated columns and too few rows."""
    column = rng.normal(size=6)
    with pytest.raises(RankDeficientError):
        stats.centered_least_squares(rng.normal(size=6), np.column_stack([column] * 2))
    with pytest.raises(RankDeficientError):
        stats.centered_least_squares([1.0, 2.0], [[1.0, 2.0], [3.0, 5.0]])
    with pytest.raises(RankDeficientError):
        stats.centered_least_squares([1.0, 2.0, 4.0], [5.0, 5.0, 5.0])
    assert stats.centered_least_squares(TEST_SAMPLE, np.zeros((3, 0))).size == 0


def test_annihilator_residuals(rng: np.random.Generator) -> None:
    """Test residuals are orthogonal to the constant and the design."""
    x = rng.normal(size=(10, 2))
    y = rng.normal(size=10)
    residuals = stats.annihilator_residuals(y, x)
    assert residuals.sum() == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(x.T @ residuals, 0.0, atol=1e-10)
    np.testing.assert_allclose(
        stats.annihilator_residuals(TEST_SAMPLE), [-1.0, 0.0, 1.0]
    )


def test_fourier_normal_equations(rng: np.random.Generator) -> None:
    """Test that the least-squares solution solves the Fourier normal equations."""
    x = rng.normal(size=(9, 3))
    y = rng.normal(size=9)
    beta = stats.centered_least_squares(y, x)
    assert stats.fourier_normal_equations_gap(beta, x, y) < 1e-10
    assert stats.fourier_normal_equations_gap(beta + 1.0, x, y) > 1e-3
    with pytest.raises(DimensionMismatchError):
        stats.fourier_normal_equations_gap(beta[:2], x, y)


def test_degrees_of_freedom() -> None:
    """Test DF and the sample variance."""
    assert stats.degrees_of_freedom(1) == 0
    assert stats.degrees_of_freedom(10) == 9
    assert stats.sample_variance(TEST_SAMPLE) == 1.0
    with pytest.raises(InsufficientDataError):
        stats.sample_variance([4.0])


@pytest.mark.parametrize(
    "n, rho, bound",
    [
        (4, 1.0, RHO_UPPER_BOUND),
        (4, 1.5, RHO_UPPER_BOUND),
        (4, -1.0 / 3.0, RHO_LOWER_BOUND),
        (2, -1.0, RHO_LOWER_BOUND),
        (1, 1.0, RHO_UPPER_BOUND),
    ],
)
def test_equicorrelation_range(n: int, rho: float, bound: str) -> None:
    """Test the positive-definite range of rho."""
    with pytest.raises(EquicorrelationRangeError) as excinfo:
        stats.equicorrelation(n, rho)
    assert excinfo.value.bound == bound


def test_equicorrelation_valid() -> None:
    """Test valid equicorrelations, including n = 1."""
    assert stats.equicorrelation(4, -0.3).matrix == core.DoubleConstant(4, 1.0, -0.3)
    assert stats.equicorrelation(1, -5.0).rho == -5.0


def test_equicorrelation_forms() -> None:
    """Test the root, inverse and inverse root."""
    n, rho = 5, 0.4
    sigma2, sigma, sigma2_inv, sigma_inv = stats.equicorrelation_forms(
        stats.equicorrelation(n, rho)
    )
    dense_sigma2 = dense(n, 1.0, rho)
    root = core.materialize(sigma)
    np.testing.assert_allclose(core.materialize(sigma2), dense_sigma2)
    np.testing.assert_allclose(root @ root, dense_sigma2, atol=1e-12)
    np.testing.assert_allclose(
        core.materialize(sigma2_inv), np.linalg.inv(dense_sigma2), atol=1e-12
    )
    np.testing.assert_allclose(
        root @ core.materialize(sigma_inv), np.eye(n), atol=1e-12
    )


def test_effective_df() -> None:
    """Test the effective degrees of freedom and sample size."""
    report = stats.effective_df(3, TEST_RHO)
    assert report.df == 2
    assert report.df_eff == 1.0
    assert report.n_eff == 2.0
    assert report.df_eff_squared == 0.5
    assert report.n_eff_squared == 1.5

    c = core.materialize(core.centering_matrix(8))
    assert np.trace(c @ dense(8, 1.0, 0.4)) == pytest.approx(
        stats.effective_df(8, 0.4).df_eff
    )
    with pytest.raises(InsufficientDataError):
        stats.effective_df(1, 0.0)


def test_variance_report() -> None:
    """Test the plain and rho-adjusted variance estimates."""
    plain = stats.variance_report(TEST_SAMPLE)
    assert plain.rho is None
    assert plain.ss == 2.0
    assert plain.variance_estimate == 1.0

    adjusted = stats.variance_report(TEST_SAMPLE, TEST_RHO)
    assert adjusted.rho == TEST_RHO
    assert adjusted.variance_estimate == 2.0
    assert stats.adjusted_sample_variance(TEST_SAMPLE, TEST_RHO) == 2.0
    with pytest.raises(InsufficientDataError):
        stats.variance_report([1.0])


def test_pooled_ss_decomposition() -> None:
    """Test the pooled sum of squares split."""
    decomposition = stats.pooled_ss_decomposition(TEST_GROUPS)
    assert decomposition.pooled_ss == TEST_POOLED_SS
    assert decomposition.group_ss == TEST_GROUP_SS
    assert decomposition.between_term == TEST_BETWEEN_TERM
    assert decomposition.between_term_weighted == pytest.approx(TEST_BETWEEN_TERM)
    assert decomposition.group_sizes.blocks == (2, 2)
    assert decomposition.identity_residual == pytest.approx(0.0, abs=1e-12)
    assert stats.two_group_between_term(*TEST_GROUPS) == TEST_BETWEEN_TERM


def test_pooled_ss_decomposition_random(rng: np.random.Generator) -> None:
    """Test the identity on unequal groups."""
    groups = [rng.normal(mean, 1.0, size) for mean, size in ((0, 1), (3, 4), (-2, 7))]
    decomposition = stats.pooled_ss_decomposition(groups)
    assert math.fsum(
        (*decomposition.group_ss, decomposition.between_term)
    ) == pytest.approx(decomposition.pooled_ss)
    assert decomposition.identity_residual < 1e-9 * decomposition.pooled_ss


def test_pooled_ss_single_group() -> None:
    """Test that a single group has no between-group term."""
    decomposition = stats.pooled_ss_decomposition([TEST_SAMPLE])
    assert decomposition.between_term == pytest.approx(0.0, abs=1e-15)
    assert decomposition.between_term_weighted == pytest.approx(0.0, abs=1e-15)


def test_pooled_ss_empty() -> None:
    """Test empty input and empty groups."""
    with pytest.raises(EmptyInputError):
        stats.pooled_ss_decomposition([])
    with pytest.raises(EmptyInputError):
        stats.pooled_ss_decomposition([[1.0], []])


def test_pooled_ss_large_offset() -> None:
    """Test that a large common offset leaves every term unchanged."""
    offset = 1e8
    groups = [[offset + value for value in group] for group in TEST_GROUPS]
    decomposition = stats.pooled_ss_decomposition(groups)
    assert decomposition.pooled_ss == pytest.approx(TEST_POOLED_SS)
    assert decomposition.group_ss == pytest.approx(TEST_GROUP_SS)
    assert decomposition.between_term == pytest.approx(TEST_BETWEEN_TERM)
    assert decomposition.between_term_weighted == pytest.approx(TEST_BETWEEN_TERM)
    assert decomposition.identity_residual <= 1e-9 * decomposition.pooled_ss


def _within_band(estimates: list[float], expected: float) -> bool:
    values = np.asarray(estimates)
    stderr = values.std(ddof=1) / math.sqrt(values.size)
    return abs(values.mean() - expected) <= UNBIASED_BAND * stderr


def test_sample_variance_unbiased() -> None:
    """Test E[S^2] = 1 for independent standard normals."""
    samples = oracle.equicorrelated_samples(10, 1.0, 0.0, UNBIASED_TRIALS, TEST_SEED)
    assert _within_band([stats.sample_variance(row) for row in samples], 1.0)


def test_adjusted_sample_variance_unbiased() -> None:
    """Test that the trace-adjusted estimator is unbiased under equicorrelation."""
    samples = oracle.equicorrelated_samples(
        8, 1.0, 0.4, UNBIASED_TRIALS, TEST_SEED, mu=3.0
    )
    estimates = [stats.adjusted_sample_variance(row, 0.4) for row in samples]
    assert _within_band(estimates, 1.0)
