"""Randomized invariant checks of the structured library against dense oracles.

Each check draws its own seeded generator, so a report is reproducible from
(seed, max_n) alone. A check signals failure by raising InvariantViolation
with the offending values.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
import logging
from typing import Any

import attr
import numpy as np

from . import algebra, core, fourier, oracle, stats
from .const import (
    DEFAULT_MAX_N,
    DEFAULT_SEED,
    DEFAULT_VERIFY_TRIALS,
    FOURIER_CHECK_MAX_N,
    MACHINE_EPS,
)
from .exceptions import DoubleConstantError, InvariantViolation

_LOGGER: logging.Logger = logging.getLogger(__name__)

STATUS_PASSED = "passed"
STATUS_FAILED = "failed"

Check = Callable[[np.random.Generator, int, int], None]

INVARIANTS: dict[str, Check] = {}


def invariant(name: str) -> Callable[[Check], Check]:
    """Register a check under a name."""

    def register(check: Check) -> Check:
        INVARIANTS[name] = check
        return check

    return register


@attr.s(frozen=True, slots=True, auto_attribs=True)
class CheckResult:
    """Outcome of one invariant check."""

    name: str
    status: str
    detail: str = ""


@attr.s(frozen=True, slots=True, auto_attribs=True)
class VerifyReport:
    """Outcome of a verification run."""

    seed: int
    max_n: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        """Return True if every check passed."""
        return all(check.status == STATUS_PASSED for check in self.checks)

    @property
    def first_failure(self) -> CheckResult | None:
        """Return the first failed check, if any."""
        for check in self.checks:
            if check.status != STATUS_PASSED:
                return check
        return None


def _expect(name: str, ok: bool, **counterexample: Any) -> None:
    if not ok:
        raise InvariantViolation(name, counterexample)


def _max_error(actual: Any, expected: Any) -> float:
    return float(np.max(np.abs(np.asarray(actual) - np.asarray(expected)), initial=0.0))


def _random_matrix(rng: np.random.Generator, max_n: int) -> core.DoubleConstant:
    n = int(rng.integers(1, max_n + 1))
    a, t = rng.uniform(-10.0, 10.0, size=2)
    return core.DoubleConstant(n, a, t)


def _random_positive_definite(
    rng: np.random.Generator, max_n: int, min_n: int = 1
) -> core.DoubleConstant:
    n = int(rng.integers(min_n, max_n + 1))
    major, minor = rng.uniform(0.1, 5.0, size=2)
    return core.from_eigenvalues(core.CanonicalForm(n, major, minor))


@invariant("eigenvalue_round_trip")
def check_eigenvalue_round_trip(
    rng: np.random.Generator, max_n: int, trials: int
) -> None:
    """from_eigenvalues(eigenvalues(M)) reproduces (a, t)."""
    for _ in range(trials):
        m = _random_matrix(rng, max_n)
        back = core.from_eigenvalues(core.eigenvalues(m))
        scale = max(abs(m.a), abs(m.t), 1.0) * m.n
        _expect(
            "eigenvalue_round_trip",
            abs(back.a - m.a) <= 8 * MACHINE_EPS * scale
            and abs(back.t - m.t) <= 8 * MACHINE_EPS * scale,
            n=m.n,
            a=m.a,
            t=m.t,
            a_back=back.a,
            t_back=back.t,
        )


@invariant("determinant_oracle")
def check_determinant(rng: np.random.Generator, max_n: int, trials: int) -> None:
    """Closed-form determinant and characteristic polynomial match dense LU."""
    for _ in range(trials):
        m = _random_matrix(rng, min(max_n, 8))
        closed = core.determinant(m)
        dense = oracle.dense_det(core.materialize(m))
        _expect(
            "determinant_oracle",
            abs(closed - dense) <= 1e-9 * max(1.0, abs(dense)),
            n=m.n,
            a=m.a,
            t=m.t,
            closed=closed,
            dense=dense,
        )
        _expect(
            "determinant_oracle",
            core.char_poly(m, 0.0) == closed,
            n=m.n,
            a=m.a,
            t=m.t,
        )
        for lam in (m.lambda_major, m.lambda_minor):
            if m.n == 1 and lam == m.lambda_major:
                continue
            _expect(
                "determinant_oracle",
                abs(core.char_poly(m, lam)) <= 1e-9 * max(1.0, abs(lam) ** m.n),
                n=m.n,
                a=m.a,
                t=m.t,
                lam=lam,
            )


@invariant("eigenvectors")
def check_eigenvectors(rng: np.random.Generator, max_n: int, trials: int) -> None:
    """The ones vector has eigenvalue lambda_minor, zero-sum vectors lambda_major."""
    for _ in range(trials):
        m = _random_matrix(rng, max_n)
        dense = core.materialize(m)
        ones = np.ones(m.n)
        _expect(
            "eigenvectors",
            _max_error(dense @ ones, m.lambda_minor * ones)
            <= 1e-10 * max(1.0, core.eigenvalue_scale(m)),
            n=m.n,
            a=m.a,
            t=m.t,
        )
        for k in range(1, m.n):
            v = np.zeros(m.n)
            v[0], v[k] = 1.0, -1.0
            _expect(
                "eigenvectors",
                _max_error(dense @ v, m.lambda_major * v)
                <= 1e-10 * max(1.0, core.eigenvalue_scale(m)),
                n=m.n,
                a=m.a,
                t=m.t,
                k=k,
            )


@invariant("classify_scaling")
def check_classify_scaling(rng: np.random.Generator, max_n: int, trials: int) -> None:
    """Positive scaling keeps the class, negative scaling swaps definiteness."""
    swapped = {
        core.MatrixClass.POSITIVE_DEFINITE: core.MatrixClass.NEGATIVE_DEFINITE,
        core.MatrixClass.NEGATIVE_DEFINITE: core.MatrixClass.POSITIVE_DEFINITE,
    }
    for _ in range(trials):
        m = _random_matrix(rng, max_n)
        label = core.classify(m)
        scale = float(rng.uniform(0.5, 4.0))
        up = core.classify(core.DoubleConstant(m.n, scale * m.a, scale * m.t))
        down = core.classify(core.DoubleConstant(m.n, -scale * m.a, -scale * m.t))
        _expect("classify_scaling", up == label, n=m.n, a=m.a, t=m.t, scale=scale)
        _expect(
            "classify_scaling",
            down == swapped.get(label, label),
            n=m.n,
            a=m.a,
            t=m.t,
            scale=-scale,
        )


@invariant("basis_decomposition")
def check_basis_decomposition(
    rng: np.random.Generator, max_n: int, trials: int
) -> None:
    """Decomposing over a basis and recombining reproduces M."""
    for _ in range(trials):
        m = _random_matrix(rng, max_n)
        b1 = core.DoubleConstant(m.n, *rng.uniform(-5.0, 5.0, size=2))
        b2 = core.DoubleConstant(m.n, *rng.uniform(-5.0, 5.0, size=2))
        if abs(b1.a * b2.t - b2.a * b1.t) < 1e-3:
            continue
        weight_1, weight_2 = core.decompose_in_basis(m, b1, b2)
        rebuilt = algebra.linear_combination([(weight_1, b1), (weight_2, b2)])
        _expect(
            "basis_decomposition",
            _max_error(core.materialize(rebuilt), core.materialize(m))
            <= 1e-7 * max(1.0, abs(m.a), abs(m.t)),
            n=m.n,
            a=m.a,
            t=m.t,
        )

        major, minor = core.decompose_canonical(m)
        canonical = algebra.linear_combination(
            [(major, core.centering_matrix(m.n)), (minor, core.mean_matrix(m.n))]
        )
        _expect(
            "basis_decomposition",
            _max_error(core.materialize(canonical), core.materialize(m))
            <= 1e-10 * max(1.0, core.eigenvalue_scale(m)),
            n=m.n,
            a=m.a,
            t=m.t,
        )

        if m.n >= 2:
            lower, upper = core.equicorrelation_limits(m.n)
            w_lower, w_upper = core.equicorrelation_limit_weights(m)
            limit = algebra.linear_combination([(w_lower, lower), (w_upper, upper)])
            _expect(
                "basis_decomposition",
                _max_error(core.materialize(limit), core.materialize(m))
                <= 1e-10 * max(1.0, core.eigenvalue_scale(m)),
                n=m.n,
                a=m.a,
                t=m.t,
            )


@invariant("closure")
def check_closure(rng: np.random.Generator, max_n: int, trials: int) -> None:
    """Linear combinations and products match their dense counterparts."""
    for _ in range(trials):
        n = int(rng.integers(1, max_n + 1))
        factors = [
            core.DoubleConstant(n, *rng.uniform(-2.0, 2.0, size=2)) for _ in range(3)
        ]
        kappas = rng.uniform(-3.0, 3.0, size=3)
        combined = algebra.linear_combination(zip(kappas, factors))
        dense_sum = sum(k * core.materialize(f) for k, f in zip(kappas, factors))
        _expect(
            "closure",
            _max_error(core.materialize(combined), dense_sum) <= 1e-10,
            n=n,
            kappas=kappas.tolist(),
        )

        structured = algebra.product(factors)
        dense = oracle.dense_matmul(
            oracle.dense_matmul(
                core.materialize(factors[0]), core.materialize(factors[1])
            ),
            core.materialize(factors[2]),
        )
        scale = max(1.0, float(np.max(np.abs(dense))))
        _expect(
            "closure",
            _max_error(core.materialize(structured), dense) <= 1e-10 * scale,
            n=n,
        )
        reordered = algebra.product(factors[::-1])
        _expect(
            "closure",
            abs(reordered.a - structured.a) <= 1e-12 * scale
            and abs(reordered.t - structured.t) <= 1e-12 * scale,
            n=n,
        )


@invariant("matrix_functions")
def check_matrix_functions(rng: np.random.Generator, max_n: int, trials: int) -> None:
    """Square roots, inverses, powers, exp and log agree with dense results."""
    for _ in range(trials):
        m = _random_positive_definite(rng, min(max_n, 16))
        dense = core.materialize(m)
        identity = np.eye(m.n)

        root = algebra.sqrt_principal(m)
        _expect(
            "matrix_functions",
            _max_error(core.materialize(algebra.product([root, root])), dense) <= 1e-10,
            n=m.n,
            a=m.a,
            t=m.t,
            fn="sqrt",
        )
        inverse = core.materialize(algebra.inverse(m))
        _expect(
            "matrix_functions",
            _max_error(dense @ inverse, identity) <= 1e-10
            and _max_error(inverse, oracle.dense_inverse(dense)) <= 1e-9,
            n=m.n,
            a=m.a,
            t=m.t,
            fn="inv",
        )
        cube = algebra.power(m, 3)
        _expect(
            "matrix_functions",
            _max_error(
                core.materialize(cube), core.materialize(algebra.product([m, m, m]))
            )
            <= 1e-10 * max(1.0, core.eigenvalue_scale(m) ** 3),
            n=m.n,
            a=m.a,
            t=m.t,
            fn="pow:3",
        )
        round_trip = algebra.exp_m(algebra.log_m(m))
        _expect(
            "matrix_functions",
            _max_error(core.materialize(round_trip), dense) <= 1e-10 * max(1.0, m.a),
            n=m.n,
            a=m.a,
            t=m.t,
            fn="exp(log)",
        )
        small = core.DoubleConstant(m.n, *rng.uniform(-1.0, 1.0, size=2) / m.n)
        expected = oracle.dense_expm(core.materialize(small))
        _expect(
            "matrix_functions",
            _max_error(core.materialize(algebra.exp_m(small)), expected) <= 1e-8,
            n=small.n,
            a=small.a,
            t=small.t,
            fn="exp",
        )


@invariant("block_decomposition")
def check_block_decomposition(
    rng: np.random.Generator, max_n: int, trials: int
) -> None:
    """Block decompositions reassemble to the dense matrix."""
    for _ in range(trials):
        k = int(rng.integers(1, 5))
        sizes = tuple(int(size) for size in rng.integers(1, max(2, max_n // 4) + 1, k))
        partition = algebra.Partition(sizes)
        m = core.DoubleConstant(partition.n, *rng.uniform(-3.0, 3.0, size=2))
        constants = [tuple(rng.uniform(-3.0, 3.0, size=2)) for _ in sizes]
        decomposition = algebra.block_decompose(m, partition, constants)
        _expect(
            "block_decomposition",
            _max_error(algebra.assemble(decomposition), core.materialize(m)) <= 1e-11,
            sizes=sizes,
            a=m.a,
            t=m.t,
        )
        centered = algebra.assemble(algebra.block_decompose_centering(partition))
        _expect(
            "block_decomposition",
            _max_error(centered, core.materialize(core.centering_matrix(partition.n)))
            <= 1e-12,
            sizes=sizes,
        )


@invariant("fourier_diagonalization")
def check_fourier(rng: np.random.Generator, max_n: int, trials: int) -> None:
    """U is unitary and symmetric and U·diag(L)·conj(U) rebuilds M."""
    for n in range(1, max(max_n, FOURIER_CHECK_MAX_N) + 1):
        u = fourier.unitary_dft(n)
        _expect(
            "fourier_diagonalization",
            _max_error(u.entries @ np.conj(u.entries), np.eye(n)) <= 1e-12
            and np.array_equal(u.entries, u.entries.T),
            n=n,
        )
        for r in range(-2 * n, 2 * n + 1):
            _expect(
                "fourier_diagonalization",
                fourier.geometric_sum(n, r) == (1.0 if r % n == 0 else 0.0),
                n=n,
                r=r,
            )

    for _ in range(trials):
        m = _random_matrix(rng, max_n)
        u, lambdas = fourier.diagonalize(m)
        rebuilt = fourier.reconstruct(u, lambdas)
        _expect(
            "fourier_diagonalization",
            _max_error(rebuilt, core.materialize(m))
            <= 1e-10 * max(1.0, core.eigenvalue_scale(m)),
            n=m.n,
            a=m.a,
            t=m.t,
        )


@invariant("fourier_duality")
def check_fourier_duality(rng: np.random.Generator, max_n: int, trials: int) -> None:
    """Fourier-side products and norms equal the dense ones."""
    for _ in range(trials):
        m1 = _random_matrix(rng, max_n)
        m2 = core.DoubleConstant(m1.n, *rng.uniform(-10.0, 10.0, size=2))
        x = rng.normal(size=m1.n)
        y = rng.normal(size=m1.n)
        dense_1 = core.materialize(m1)
        dense_2 = core.materialize(m2)
        scale = max(1.0, core.eigenvalue_scale(m1) * core.eigenvalue_scale(m2)) * m1.n

        columns = rng.normal(size=(m1.n, 3))
        _expect(
            "fourier_duality",
            _max_error(fourier.apply_via_fourier(m1, columns), dense_1 @ columns)
            <= 1e-9 * max(1.0, core.eigenvalue_scale(m1)),
            n=m1.n,
            a=m1.a,
            t=m1.t,
        )
        _expect(
            "fourier_duality",
            abs(fourier.parseval_product(m1, m2, x, y) - (dense_1 @ x) @ (dense_2 @ y))
            <= 1e-10 * scale,
            n=m1.n,
        )
        norm = fourier.plancherel_norm(m1, x)
        _expect(
            "fourier_duality",
            norm >= 0
            and abs(norm - float(np.sum((dense_1 @ x) ** 2)))
            <= 1e-10 * max(1.0, core.eigenvalue_scale(m1) ** 2) * m1.n,
            n=m1.n,
        )


@invariant("centering")
def check_centering(rng: np.random.Generator, max_n: int, trials: int) -> None:
    """C is idempotent, its own pseudoinverse, and kills exactly the constants."""
    for n in range(1, max_n + 1):
        c = core.materialize(core.centering_matrix(n))
        for condition in (c @ c @ c - c, (c @ c).T - c @ c):
            _expect("centering", _max_error(condition, 0.0) <= 1e-12, n=n)
        _expect("centering", _max_error(c @ np.full(n, 3.7), 0.0) <= 1e-12, n=n)
        _expect(
            "centering",
            oracle.dense_rank(c, tol=1e-10) == stats.degrees_of_freedom(n) == core.rank(
                core.centering_matrix(n), tol=1e-12
            ),
            n=n,
        )

    for _ in range(trials):
        x = rng.normal(size=(int(rng.integers(2, max_n + 1)), 3))
        once = stats.center_columns(x)
        _expect(
            "centering",
            _max_error(stats.center_columns(once), once) <= 1e-12
            and float(np.linalg.norm(once)) > 0,
            shape=x.shape,
        )


@invariant("ss_decomposition")
def check_ss_decomposition(rng: np.random.Generator, max_n: int, trials: int) -> None:
    """Pooled SS splits into group terms plus the between-group term."""
    for _ in range(trials):
        k = int(rng.integers(1, 6))
        groups = [
            rng.normal(rng.uniform(-5.0, 5.0), 1.0, size=int(rng.integers(1, 9)))
            for _ in range(k)
        ]
        decomposition = stats.pooled_ss_decomposition(groups)
        _expect(
            "ss_decomposition",
            decomposition.identity_residual <= 1e-9 * max(1.0, decomposition.pooled_ss),
            sizes=decomposition.group_sizes.blocks,
        )
        if k == 2:
            closed = stats.two_group_between_term(*groups)
            _expect(
                "ss_decomposition",
                abs(closed - decomposition.between_term)
                <= 1e-10 * max(1.0, decomposition.pooled_ss),
                closed=closed,
                between=decomposition.between_term,
            )


@invariant("equicorrelation")
def check_equicorrelation(rng: np.random.Generator, max_n: int, trials: int) -> None:
    """Root, inverse and residual-scaling identities of the equicorrelation matrix."""
    for _ in range(trials):
        n = int(rng.integers(2, max_n + 1))
        rho = float(rng.uniform(-1.0 / (n - 1), 1.0) * 0.98)
        e = stats.equicorrelation(n, rho)
        sigma2, sigma, sigma2_inv, sigma_inv = stats.equicorrelation_forms(e)
        identity = np.eye(n)
        dense_sigma = core.materialize(sigma)
        dense_sigma2 = core.materialize(sigma2)
        tol = 1e-10
        _expect(
            "equicorrelation",
            _max_error(dense_sigma @ dense_sigma, dense_sigma2) <= 1e-10
            and _max_error(dense_sigma2 @ core.materialize(sigma2_inv), identity) <= tol
            and _max_error(dense_sigma @ core.materialize(sigma_inv), identity) <= tol,
            n=n,
            rho=rho,
        )
        c = core.materialize(core.centering_matrix(n))
        _expect(
            "equicorrelation",
            _max_error(c @ dense_sigma, np.sqrt(1.0 - rho) * c) <= 1e-10
            and _max_error(c @ dense_sigma2, (1.0 - rho) * c) <= 1e-10
            and abs(np.trace(c @ dense_sigma2) - stats.effective_df(n, rho).df_eff)
            <= 1e-10 * n,
            n=n,
            rho=rho,
        )


def run_verify(
    seed: int = DEFAULT_SEED,
    max_n: int = DEFAULT_MAX_N,
    checks: Mapping[str, Check] | None = None,
    trials: int = DEFAULT_VERIFY_TRIALS,
) -> VerifyReport:
    """Run every registered check and collect the results."""
    selected = INVARIANTS if checks is None else checks
    results = []
    for index, (name, check) in enumerate(selected.items()):
        rng = np.random.default_rng([seed, index])
        try:
            check(rng, max_n, trials)
        except InvariantViolation as exc:
            _LOGGER.error("Invariant %s failed: %s", name, exc.counterexample)
            results.append(CheckResult(name, STATUS_FAILED, str(exc)))
        except DoubleConstantError as exc:
            _LOGGER.error("Invariant %s raised %s", name, exc)
            results.append(CheckResult(name, STATUS_FAILED, f"{name}: {exc}"))
        else:
            _LOGGER.debug("Invariant %s passed", name)
            results.append(CheckResult(name, STATUS_PASSED))
    return VerifyReport(seed=seed, max_n=max_n, checks=tuple(results))
