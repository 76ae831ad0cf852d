"""Test the Fourier view of double-constant matrices."""

from __future__ import annotations

import numpy as np
import pytest

from dcmatrix import core, fourier
from dcmatrix.exceptions import (
    DimensionMismatchError,
    EmptyInputError,
    ImaginaryResidueError,
    InvalidParameterError,
)

from . import TEST_LAMBDA_MAJOR, TEST_LAMBDA_MINOR, TEST_N, create_test_matrix


@pytest.mark.parametrize("n", [1, 2, 5, 16])
def test_unitary_dft(n: int) -> None:
    """Test that U is unitary and symmetric."""
    u = fourier.unitary_dft(n)
    np.testing.assert_allclose(u.entries @ np.conj(u.entries), np.eye(n), atol=1e-12)
    np.testing.assert_array_equal(u.entries, u.entries.T)


def test_unitary_dft_invalid() -> None:
    """Test a zero-size transform."""
    with pytest.raises(InvalidParameterError):
        fourier.unitary_dft(0)


def test_dft_matches_numpy(rng: np.random.Generator) -> None:
    """Test the transform against numpy's FFT."""
    x = rng.normal(size=8)
    np.testing.assert_allclose(fourier.dft(x), np.fft.fft(x) / np.sqrt(8), atol=1e-12)
    np.testing.assert_allclose(fourier.idft(fourier.dft(x)).real, x, atol=1e-12)


def test_dft_empty() -> None:
    """Test transforms of empty input."""
    with pytest.raises(EmptyInputError):
        fourier.dft([])
    with pytest.raises(EmptyInputError):
        fourier.idft([])


@pytest.mark.parametrize(
    "n, r, expected",
    [
        (4, 0, 1.0),
        (4, 4, 1.0),
        (4, -8, 1.0),
        (4, 1, 0.0),
        (5, 3, 0.0),
        (6, -1, 0.0),
        (1, 7, 1.0),
        (3, 3 * 2**64, 1.0),
        (6, 2**70, 0.0),
        (5, -5 * 2**63, 1.0),
    ],
)
def test_geometric_sum(n: int, r: int, expected: float) -> None:
    """Test the geometric sum is the indicator of n dividing r."""
    assert fourier.geometric_sum(n, r) == expected


def test_spectrum_and_diagonalize() -> None:
    """Test the eigenvalue diagonal and its reconstruction."""
    m = create_test_matrix()
    u, lambdas = fourier.diagonalize(m)
    np.testing.assert_array_equal(
        lambdas, [TEST_LAMBDA_MINOR] + [TEST_LAMBDA_MAJOR] * (TEST_N - 1)
    )
    np.testing.assert_allclose(
        fourier.reconstruct(u, lambdas), core.materialize(m), atol=1e-12
    )


def test_reconstruct_errors() -> None:
    """Test a wrong eigenvalue count and a non-unitary basis."""
    with pytest.raises(DimensionMismatchError):
        fourier.reconstruct(fourier.unitary_dft(3), [1.0, 2.0])

    skewed = fourier.UnitaryDFT(2, np.array([[1.0, 1.0j], [1.0j, 1.0]]))
    with pytest.raises(ImaginaryResidueError):
        fourier.reconstruct(skewed, [1.0, 2.0])


def test_apply_via_fourier(rng: np.random.Generator) -> None:
    """Test that scaling frequencies applies the matrix."""
    m = create_test_matrix()
    x = rng.normal(size=TEST_N)
    np.testing.assert_allclose(
        fourier.apply_via_fourier(m, x), core.apply(m, x), atol=1e-12
    )
    columns = rng.normal(size=(TEST_N, 4))
    np.testing.assert_allclose(
        fourier.apply_via_fourier(m, columns), core.apply(m, columns), atol=1e-12
    )
    with pytest.raises(DimensionMismatchError):
        fourier.apply_via_fourier(m, np.ones(TEST_N + 2))


def test_parseval_and_plancherel(rng: np.random.Generator) -> None:
    """Test inner products and norms computed from Fourier coefficients."""
    m1 = create_test_matrix()
    m2 = core.DoubleConstant(TEST_N, -1.0, 3.0)
    x = rng.normal(size=TEST_N)
    y = rng.normal(size=TEST_N)
    dense_1 = core.materialize(m1)
    dense_2 = core.materialize(m2)

    assert fourier.parseval_product(m1, m2, x, y) == pytest.approx(
        (dense_1 @ x) @ (dense_2 @ y)
    )
    assert fourier.plancherel_norm(m1, x) == pytest.approx(np.sum((dense_1 @ x) ** 2))

    with pytest.raises(DimensionMismatchError):
        fourier.parseval_product(m1, core.identity(2), x, y)
    with pytest.raises(DimensionMismatchError):
        fourier.plancherel_norm(m1, np.ones(2))
