"""Test the double-constant matrix value."""

from __future__ import annotations

import math

import numpy as np
import pytest

from dcmatrix import core
from dcmatrix.core import CanonicalForm, DoubleConstant, MatrixClass
from dcmatrix.exceptions import (
    DimensionMismatchError,
    InvalidParameterError,
    ProportionalBasisError,
)

from . import (
    TEST_A,
    TEST_LAMBDA_MAJOR,
    TEST_LAMBDA_MINOR,
    TEST_N,
    TEST_T,
    create_test_matrix,
    dense,
)


def test_eigenvalues() -> None:
    """Test the derived eigenvalues."""
    m = create_test_matrix()
    assert m.lambda_major == TEST_LAMBDA_MAJOR
    assert m.lambda_minor == TEST_LAMBDA_MINOR
    assert core.eigenvalues(m) == CanonicalForm(
        TEST_N, TEST_LAMBDA_MAJOR, TEST_LAMBDA_MINOR
    )
    np.testing.assert_allclose(
        sorted(np.linalg.eigvalsh(core.materialize(m))),
        [TEST_LAMBDA_MAJOR] * (TEST_N - 1) + [TEST_LAMBDA_MINOR],
    )


def test_from_eigenvalues_round_trip() -> None:
    """Test recovering (a, t) from the canonical form."""
    c = CanonicalForm(TEST_N, TEST_LAMBDA_MAJOR, TEST_LAMBDA_MINOR)
    m = core.from_eigenvalues(c)
    assert m.a == pytest.approx(TEST_A)
    assert m.t == pytest.approx(TEST_T)


@pytest.mark.parametrize(
    "n, a, t",
    [
        (0, 1.0, 0.0),
        (-3, 1.0, 0.0),
        (2.5, 1.0, 0.0),
        (True, 1.0, 0.0),
        (3, math.nan, 0.0),
        (3, 1.0, math.inf),
        (3, "x", 0.0),
    ],
)
def test_invalid_parameters(n: object, a: object, t: object) -> None:
    """Test constructor validation."""
    with pytest.raises(InvalidParameterError):
        DoubleConstant(n, a, t)  # type: ignore[arg-type]


def test_named_constructors() -> None:
    """Test identity, zeros, ones, mean and centering matrices."""
    np.testing.assert_array_equal(core.materialize(core.identity(3)), np.eye(3))
    np.testing.assert_array_equal(core.materialize(core.zeros(3)), np.zeros((3, 3)))
    np.testing.assert_array_equal(core.materialize(core.ones(3)), np.ones((3, 3)))
    np.testing.assert_allclose(
        core.materialize(core.mean_matrix(4)), np.full((4, 4), 0.25)
    )
    np.testing.assert_allclose(
        core.materialize(core.centering_matrix(4)), np.eye(4) - 0.25
    )
    assert core.new(TEST_N, TEST_A, TEST_T) == create_test_matrix()


def test_determinant() -> None:
    """Test the closed-form determinant against numpy."""
    m = create_test_matrix()
    expected = TEST_LAMBDA_MAJOR ** (TEST_N - 1) * TEST_LAMBDA_MINOR
    assert core.determinant(m) == pytest.approx(expected)
    assert core.determinant(m) == pytest.approx(np.linalg.det(core.materialize(m)))
    assert core.determinant(core.centering_matrix(6)) == pytest.approx(0.0, abs=1e-15)


def test_determinant_overflow() -> None:
    """Test that an overflowing determinant is an infinity."""
    assert core.determinant(DoubleConstant(2000, 10.0, 0.0)) == math.inf
    assert core.determinant(DoubleConstant(2001, -10.0, 0.0)) == -math.inf


def test_char_poly() -> None:
    """Test the characteristic polynomial vanishes at the eigenvalues."""
    m = create_test_matrix()
    assert core.char_poly(m, TEST_LAMBDA_MAJOR) == 0.0
    assert core.char_poly(m, TEST_LAMBDA_MINOR) == 0.0
    assert core.char_poly(m, 0.0) == core.determinant(m)
    dense_m = core.materialize(m)
    assert core.char_poly(m, 0.7) == pytest.approx(
        np.linalg.det(dense_m - 0.7 * np.eye(TEST_N))
    )


@pytest.mark.parametrize(
    "n, a, t, expected",
    [
        (3, 0.0, 0.0, MatrixClass.ZERO),
        (3, 2.0, 2.0, MatrixClass.NON_ZERO_CONSTANT),
        (3, 2.0, 0.0, MatrixClass.SCALED_IDENTITY),
        (3, 2.0, -1.0, MatrixClass.CENTERING_PROPORTIONAL),
        (3, 2.0, 1.0, MatrixClass.POSITIVE_DEFINITE),
        (3, -2.0, -1.0, MatrixClass.NEGATIVE_DEFINITE),
        (3, 1.0, 2.0, MatrixClass.INDEFINITE),
        (1, 0.0, 5.0, MatrixClass.ZERO),
        (1, 3.0, 7.0, MatrixClass.SCALED_IDENTITY),
        (1, -3.0, 7.0, MatrixClass.SCALED_IDENTITY),
    ],
)
def test_classify(n: int, a: float, t: float, expected: MatrixClass) -> None:
    """Test classification by eigenvalue signs."""
    assert core.classify(DoubleConstant(n, a, t)) == expected


def test_classify_tolerance() -> None:
    """Test that the zero tolerance widens the zero tests."""
    m = DoubleConstant(3, 1e-13, 0.0)
    assert core.classify(m) == MatrixClass.SCALED_IDENTITY
    assert core.classify(m, 1e-12) == MatrixClass.ZERO
    assert (
        core.classify(core.centering_matrix(7), 1e-12)
        == MatrixClass.CENTERING_PROPORTIONAL
    )
    with pytest.raises(InvalidParameterError):
        core.classify(m, -1.0)
    with pytest.raises(InvalidParameterError):
        core.classify(m, math.nan)


def test_class_values() -> None:
    """Test the class names used on the command line."""
    assert MatrixClass.POSITIVE_DEFINITE.value == "positive_definite"
    assert MatrixClass.CENTERING_PROPORTIONAL.value == "centering_proportional"


def test_rank_and_properness() -> None:
    """Test rank, properness and non-degeneracy."""
    assert core.rank(core.zeros(4)) == 0
    assert core.rank(core.ones(4)) == 1
    assert core.rank(core.centering_matrix(4), 1e-12) == 3
    assert core.rank(create_test_matrix()) == TEST_N

    assert not core.is_proper(core.ones(4))
    assert core.is_proper(core.identity(4))
    assert not core.is_non_degenerate(core.identity(4))
    assert core.is_non_degenerate(create_test_matrix())


def test_trace() -> None:
    """Test tr(M) = n·a."""
    assert core.trace(create_test_matrix()) == TEST_N * TEST_A


def test_materialize() -> None:
    """Test the dense matrix layout."""
    np.testing.assert_array_equal(
        core.materialize(create_test_matrix()), dense(TEST_N, TEST_A, TEST_T)
    )


def test_apply(rng: np.random.Generator) -> None:
    """Test M·x without materializing M."""
    m = create_test_matrix()
    x = rng.normal(size=TEST_N)
    np.testing.assert_allclose(core.apply(m, x), core.materialize(m) @ x)

    columns = rng.normal(size=(TEST_N, 3))
    np.testing.assert_allclose(core.apply(m, columns), core.materialize(m) @ columns)

    with pytest.raises(DimensionMismatchError):
        core.apply(m, np.ones(TEST_N + 1))


def test_decompose_in_basis() -> None:
    """Test weights over a non-proportional basis."""
    m = create_test_matrix()
    weight_1, weight_2 = core.decompose_in_basis(
        m, core.identity(TEST_N), core.ones(TEST_N)
    )
    assert weight_1 == pytest.approx(TEST_LAMBDA_MAJOR)
    assert weight_2 == pytest.approx(TEST_T)


def test_decompose_in_basis_errors() -> None:
    """Test proportional and mismatched bases."""
    m = create_test_matrix()
    with pytest.raises(ProportionalBasisError):
        core.decompose_in_basis(
            m, DoubleConstant(TEST_N, 2.0, 1.0), DoubleConstant(TEST_N, 4.0, 2.0)
        )
    with pytest.raises(DimensionMismatchError):
        core.decompose_in_basis(m, core.identity(2), core.ones(TEST_N))


def test_decompose_canonical() -> None:
    """Test M = lambda_major·C + lambda_minor·(1/n)."""
    m = create_test_matrix()
    major, minor = core.decompose_canonical(m)
    centering = core.materialize(core.centering_matrix(TEST_N))
    mean = core.materialize(core.mean_matrix(TEST_N))
    rebuilt = major * centering + minor * mean
    np.testing.assert_allclose(rebuilt, core.materialize(m))


def test_equicorrelation_limits() -> None:
    """Test the limiting equicorrelation matrices and their weights."""
    lower, upper = core.equicorrelation_limits(TEST_N)
    np.testing.assert_allclose(
        core.materialize(lower),
        TEST_N / (TEST_N - 1) * core.materialize(core.centering_matrix(TEST_N)),
    )
    assert upper == core.ones(TEST_N)

    m = create_test_matrix()
    w_lower, w_upper = core.equicorrelation_limit_weights(m)
    np.testing.assert_allclose(
        w_lower * core.materialize(lower) + w_upper * core.materialize(upper),
        core.materialize(m),
    )

    with pytest.raises(InvalidParameterError):
        core.equicorrelation_limits(1)
