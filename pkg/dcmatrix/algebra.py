"""Closure operations and matrix functions of double-constant matrices."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
import logging
import math
from typing import Any

import attr
import numpy as np
from scipy import linalg

from .const import LAMBDA_MAJOR, LAMBDA_MINOR
from .core import (
    CanonicalForm,
    DenseMatrix,
    DoubleConstant,
    centering_matrix,
    from_eigenvalues,
    is_negligible,
    materialize,
)
from .exceptions import (
    DimensionMismatchError,
    DomainError,
    EmptyInputError,
    InvalidParameterError,
    SingularMatrixError,
)

_LOGGER: logging.Logger = logging.getLogger(__name__)


def _always(value: float) -> bool:
    return True


@attr.s(frozen=True, slots=True, auto_attribs=True)
class AnalyticSpec:
    """A scalar function lifted to double-constant matrices through their eigenvalues.

    ``domain_check`` states where ``f`` is defined. ``pole_at_zero`` marks
    functions whose failure at a zero eigenvalue means the matrix is singular.
    """

    f: Callable[[float], float]
    name: str
    domain_check: Callable[[float], bool] = _always
    pole_at_zero: bool = False


def _exp(value: float) -> float:
    with np.errstate(over="ignore"):
        return float(np.exp(value))


EXP = AnalyticSpec(f=_exp, name="exp")
LOG = AnalyticSpec(f=math.log, name="log", domain_check=lambda value: value > 0)
SQRT = AnalyticSpec(f=math.sqrt, name="sqrt", domain_check=lambda value: value >= 0)
RECIPROCAL = AnalyticSpec(
    f=lambda value: 1.0 / value,
    name="inverse",
    domain_check=lambda value: value != 0,
    pole_at_zero=True,
)


def power_spec(y: float) -> AnalyticSpec:
    """Build the AnalyticSpec for the real power lambda -> lambda^y.

    Nonnegative integer powers are defined everywhere, negative integer powers
    away from zero and fractional powers on the positive reals.
    """
    y = float(y)
    if not math.isfinite(y):
        raise InvalidParameterError(f"Power exponent must be finite, got {y}")

    def _power(value: float) -> float:
        with np.errstate(over="ignore", divide="ignore"):
            return float(np.float64(value) ** y)

    if y.is_integer() and y >= 0:
        return AnalyticSpec(f=_power, name=f"pow:{y:g}")
    if y.is_integer():
        return AnalyticSpec(
            f=_power,
            name=f"pow:{y:g}",
            domain_check=lambda value: value != 0,
            pole_at_zero=True,
        )
    return AnalyticSpec(
        f=_power, name=f"pow:{y:g}", domain_check=lambda value: value > 0
    )


@attr.s(frozen=True, slots=True, auto_attribs=True)
class Partition:
    """Ordered positive block sizes n_1 + ... + n_k = n."""

    blocks: tuple[int, ...] = attr.ib(converter=tuple)

    @blocks.validator
    def _check_blocks(self, attribute: Any, value: tuple[int, ...]) -> None:
        if not value:
            raise EmptyInputError("A partition needs at least one block")
        for size in value:
            if isinstance(size, bool) or not isinstance(size, (int, np.integer)):
                raise InvalidParameterError(
                    f"Block size must be an integer, got {size!r}"
                )
            if size < 1:
                raise InvalidParameterError(f"Block size must be positive, got {size}")

    @property
    def n(self) -> int:
        """Return the total dimension."""
        return int(sum(self.blocks))


@attr.s(frozen=True, slots=True, eq=False, auto_attribs=True)
class BlockDecomposition:
    """Block-diagonal double-constant matrices plus a dense remainder."""

    diagonal_blocks: tuple[DoubleConstant, ...]
    remainder: DenseMatrix


def _shared_dimension(matrices: Sequence[DoubleConstant]) -> int:
    """Get the common dimension of a nonempty sequence of matrices."""
    if not matrices:
        raise EmptyInputError("Expected at least one matrix")
    n = matrices[0].n
    for m in matrices[1:]:
        if m.n != n:
            raise DimensionMismatchError(f"Matrices have dimensions {n} and {m.n}")
    return n


def linear_combination(
    terms: Iterable[tuple[float, DoubleConstant]]
) -> DoubleConstant:
    """Compute sum(kappa_i · M_i) = M(sum kappa_i·a_i, sum kappa_i·t_i)."""
    pairs = [(float(kappa), m) for kappa, m in terms]
    n = _shared_dimension([m for _, m in pairs])
    a = math.fsum(kappa * m.a for kappa, m in pairs)
    t = math.fsum(kappa * m.t for kappa, m in pairs)
    return DoubleConstant(n, a, t)


def product(factors: Iterable[DoubleConstant]) -> DoubleConstant:
    """Compute the matrix product of double-constant matrices.

    Eigenvalues multiply, so the result does not depend on factor order.
    """
    matrices = list(factors)
    n = _shared_dimension(matrices)
    major = math.prod(m.lambda_major for m in matrices)
    minor = math.prod(m.lambda_minor for m in matrices)
    return from_eigenvalues(CanonicalForm(n, major, minor))


def _evaluate(
    m: DoubleConstant, spec: AnalyticSpec, eigenvalue: str, value: float
) -> float:
    """Evaluate f at one eigenvalue after its domain check."""
    if is_negligible(m, value):
        value = 0.0

    if not spec.domain_check(value):
        _LOGGER.error(
            "%s is undefined at %s = %s of M(n=%d, a=%s, t=%s)",
            spec.name,
            eigenvalue,
            value,
            m.n,
            m.a,
            m.t,
        )
        message = f"{spec.name} is undefined at {eigenvalue} = {value}"
        if spec.pole_at_zero and value == 0:
            raise SingularMatrixError(
                f"Matrix is singular: {eigenvalue} = 0", eigenvalue, value
            )
        raise DomainError(message, eigenvalue, value)

    try:
        return float(spec.f(value))
    except OverflowError:
        return math.inf


def apply_analytic(m: DoubleConstant, spec: AnalyticSpec) -> DoubleConstant:
    """Compute f(M) = M(a~, t~) with f applied to the eigenvalues.

    a~ = (f(lambda_minor) + (n - 1)·f(lambda_major))/n and
    t~ = (f(lambda_minor) - f(lambda_major))/n. A 1×1 matrix has only the
    minor eigenvalue, so t~ = 0 there.
    """
    n = m.n
    _LOGGER.debug(
        "Applying %s to eigenvalues (%s, %s)", spec.name, m.lambda_major, m.lambda_minor
    )

    if n == 1:
        a_out = _evaluate(m, spec, LAMBDA_MINOR, m.lambda_minor)
        t_out = 0.0
    else:
        f_major = _evaluate(m, spec, LAMBDA_MAJOR, m.lambda_major)
        f_minor = _evaluate(m, spec, LAMBDA_MINOR, m.lambda_minor)
        # float arithmetic overflows to inf or nan without raising
        a_out = (f_minor + (n - 1) * f_major) / n
        t_out = (f_minor - f_major) / n

    if not (math.isfinite(a_out) and math.isfinite(t_out)):
        _LOGGER.error("%s of M(n=%d, a=%s, t=%s) is not finite", spec.name, n, m.a, m.t)
        raise InvalidParameterError(
            f"{spec.name} overflows: result constants ({a_out}, {t_out}) are not finite"
        )
    return DoubleConstant(n, a_out, t_out)


def power(m: DoubleConstant, y: float) -> DoubleConstant:
    """Compute M^y."""
    return apply_analytic(m, power_spec(y))


def inverse(m: DoubleConstant) -> DoubleConstant:
    """Compute M^-1 = 1/(a-t)·[I - t/(a-t+nt)·1]."""
    return apply_analytic(m, RECIPROCAL)


def sqrt_principal(m: DoubleConstant) -> DoubleConstant:
    """Compute the principal square root of a positive semidefinite matrix."""
    return apply_analytic(m, SQRT)


def exp_m(m: DoubleConstant) -> DoubleConstant:
    """Compute the matrix exponential."""
    return apply_analytic(m, EXP)


def log_m(m: DoubleConstant) -> DoubleConstant:
    """Compute the principal matrix logarithm of a positive definite matrix.

    Uses ln(lambda_major)·I + (ln lambda_minor - ln lambda_major)/n·1, which
    stays defined when lambda_major = 1.
    """
    return apply_analytic(m, LOG)


def block_decompose(
    m: DoubleConstant,
    p: Partition,
    inner_constants: Sequence[tuple[float, float]],
) -> BlockDecomposition:
    """Split M into double-constant diagonal blocks plus a block remainder.

    The remainder holds M_l(a - a_l, t - t_l) on the diagonal blocks and t
    everywhere else.
    """
    if p.n != m.n:
        raise DimensionMismatchError(f"Partition sums to {p.n}, matrix has n={m.n}")
    if len(inner_constants) != len(p.blocks):
        raise DimensionMismatchError(
            f"Got {len(inner_constants)} inner constants for {len(p.blocks)} blocks"
        )

    blocks = tuple(
        DoubleConstant(size, a_l, t_l)
        for size, (a_l, t_l) in zip(p.blocks, inner_constants)
    )
    remainder = np.full((m.n, m.n), m.t, dtype=np.float64)
    start = 0
    for block in blocks:
        stop = start + block.n
        remainder[start:stop, start:stop] = materialize(
            DoubleConstant(block.n, m.a - block.a, m.t - block.t)
        )
        start = stop
    return BlockDecomposition(diagonal_blocks=blocks, remainder=remainder)


def centering_block_weights(p: Partition) -> tuple[float, ...]:
    """Get the block weights w_l = (n - n_l)/n_l."""
    n = p.n
    return tuple((n - size) / size for size in p.blocks)


def block_decompose_centering(p: Partition) -> BlockDecomposition:
    """Split C_n into the centering matrices of the blocks plus a remainder.

    The remainder's diagonal blocks are (w_l/n)·1 and its off-diagonal
    entries are -1/n.
    """
    constants = [(1.0 - 1.0 / size, -1.0 / size) for size in p.blocks]
    return block_decompose(centering_matrix(p.n), p, constants)


def assemble(decomposition: BlockDecomposition) -> DenseMatrix:
    """Rebuild the dense matrix of a block decomposition."""
    blocks = (materialize(block) for block in decomposition.diagonal_blocks)
    diagonal = linalg.block_diag(*blocks)
    return np.asarray(diagonal + decomposition.remainder, dtype=np.float64)
