"""Global fixtures for dcmatrix tests."""

from __future__ import annotations

from collections.abc import Callable
import io

import numpy as np
import pytest

from dcmatrix.cli import main

from . import TEST_SEED


@pytest.fixture(name="rng")
def rng_fixture() -> np.random.Generator:
    """Return a seeded random generator."""
    return np.random.default_rng(TEST_SEED)


@pytest.fixture(name="run_cli")
def run_cli_fixture() -> Callable[..., tuple[int, str]]:
    """Run the command line in-process, returning (exit code, stdout)."""

    def _run(*argv: str, stdin: str = "") -> tuple[int, str]:
        stdout = io.StringIO()
        code = main(list(argv), stdin=io.StringIO(stdin), stdout=stdout)
        return code, stdout.getvalue()

    return _run
