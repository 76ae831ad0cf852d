"""Structured versus dense timing benchmarks."""

from __future__ import annotations

from collections.abc import Callable, Iterable
import logging
import time

import attr
import numpy as np
from scipy import linalg

from .algebra import inverse, product
from .const import (
    BENCH_CSV_HEADER,
    BENCH_OP_APPLY,
    BENCH_OP_INVERSE,
    BENCH_OP_PRODUCT,
    BENCH_OPS,
)
from .core import DoubleConstant, apply, materialize
from .exceptions import InvalidParameterError

_LOGGER: logging.Logger = logging.getLogger(__name__)

Timer = Callable[[], int]


@attr.s(frozen=True, slots=True, auto_attribs=True)
class BenchRow:
    """Median timings of one operation at one dimension."""

    n: int
    op: str
    structured_ns: int
    dense_ns: int

    @property
    def speedup(self) -> float:
        """Return dense time over structured time."""
        return self.dense_ns / max(self.structured_ns, 1)


def _median_ns(call: Callable[[], object], trials: int, timer: Timer) -> int:
    call()  # warm-up, untimed
    samples = []
    for _ in range(trials):
        start = timer()
        call()
        samples.append(timer() - start)
    return int(np.median(samples))


def _workloads(n: int) -> dict[str, tuple[Callable[[], object], Callable[[], object]]]:
    """Build (structured, dense) callables per operation at dimension n."""
    left = DoubleConstant(n, 2.0, 0.5)
    right = DoubleConstant(n, 1.5, -0.25)
    dense_left = materialize(left)
    dense_right = materialize(right)
    x = np.linspace(-1.0, 1.0, n)
    return {
        BENCH_OP_APPLY: (lambda: apply(left, x), lambda: dense_left @ x),
        BENCH_OP_INVERSE: (lambda: inverse(left), lambda: linalg.inv(dense_left)),
        BENCH_OP_PRODUCT: (
            lambda: product([left, right]),
            lambda: dense_left @ dense_right,
        ),
    }


def run_benchmark(
    n_list: Iterable[int], trials: int, timer: Timer = time.perf_counter_ns
) -> list[BenchRow]:
    """Time every operation at every dimension, sorted by (n, op)."""
    if trials < 1:
        raise InvalidParameterError(f"trials must be at least 1, got {trials}")

    rows = []
    for n in sorted(set(n_list)):
        workloads = _workloads(n)
        for op in sorted(BENCH_OPS):
            structured, dense = workloads[op]
            row = BenchRow(
                n=n,
                op=op,
                structured_ns=_median_ns(structured, trials, timer),
                dense_ns=_median_ns(dense, trials, timer),
            )
            _LOGGER.debug("n=%d %s: speedup %.1fx", n, op, row.speedup)
            rows.append(row)
    return rows


def format_rows(rows: Iterable[BenchRow]) -> list[str]:
    """Render benchmark rows as CSV lines, header first."""
    lines = [BENCH_CSV_HEADER]
    for row in rows:
        lines.append(
            f"{row.n},{row.op},{row.structured_ns},{row.dense_ns},{row.speedup:.2f}"
        )
    return lines
