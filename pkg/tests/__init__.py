"""Tests for dcmatrix."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from dcmatrix.core import DoubleConstant

FIXTURES = Path(__file__).parent / "fixtures"

TEST_N = 5
TEST_A = 2.0
TEST_T = 0.5
TEST_LAMBDA_MAJOR = 1.5
TEST_LAMBDA_MINOR = 4.0

TEST_SEED = 1234
TEST_TOLERANCE = 1e-12

TEST_GROUPS = ([1.0, 2.0], [4.0, 6.0])
TEST_POOLED_SS = 14.75
TEST_GROUP_SS = (0.5, 2.0)
TEST_BETWEEN_TERM = 12.25

TEST_SAMPLE = [1.0, 2.0, 3.0]
TEST_RHO = 0.5


def create_test_matrix(
    n: int = TEST_N, a: float = TEST_A, t: float = TEST_T
) -> DoubleConstant:
    """Create a double-constant matrix for tests."""
    return DoubleConstant(n, a, t)


def dense(n: int, a: float, t: float) -> np.ndarray:
    """Build the dense matrix with a on the diagonal and t elsewhere."""
    matrix = np.full((n, n), t, dtype=np.float64)
    np.fill_diagonal(matrix, a)
    return matrix


def read_fixture(name: str) -> str:
    """Read a fixture file."""
    return (FIXTURES / name).read_text(encoding="utf-8")
