"""Command-line configuration for dcmatrix."""

from __future__ import annotations

import logging
import math
from typing import Any

import attr
import voluptuous as vol
from voluptuous.validators import All, Range

from .const import (
    CENTER_BOTH,
    CENTER_COLUMNS,
    CENTER_ROWS,
    DEFAULT_BENCH_N_LIST,
    DEFAULT_BENCH_TRIALS,
    DEFAULT_FORMATS,
    DEFAULT_MAX_N,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    MATFUN_POW_PREFIX,
    MATFUNS,
    MAX_SEED,
    OUTPUT_FORMATS,
    SUBCOMMANDS,
)
from .exceptions import InvalidParameterError

_LOGGER: logging.Logger = logging.getLogger(__name__)


def finite_float(value: Any) -> float:
    """Coerce a value to a finite float."""
    try:
        number = float(value)
    except (TypeError, ValueError) as exc:
        raise vol.Invalid(f"expected a real number, got {value!r}") from exc
    if not math.isfinite(number):
        raise vol.Invalid(f"expected a finite number, got {value!r}")
    return number


def matrix_function(value: Any) -> str:
    """Validate a matrix function name: inv, sqrt, exp, log or pow:<y>."""
    name = str(value)
    if name in MATFUNS:
        return name
    if name.startswith(MATFUN_POW_PREFIX):
        finite_float(name[len(MATFUN_POW_PREFIX) :])
        return name
    raise vol.Invalid(
        f"unknown function {name!r}, expected one of {MATFUNS} or pow:<y>"
    )


def n_list(value: Any) -> tuple[int, ...]:
    """Parse a comma separated list of dimensions such as 4,16,256."""
    if isinstance(value, str):
        items = [item for item in value.split(",") if item.strip()]
    else:
        items = list(value)
    if not items:
        raise vol.Invalid("expected at least one dimension")
    try:
        sizes = tuple(int(item) for item in items)
    except (TypeError, ValueError) as exc:
        raise vol.Invalid(f"expected integer dimensions, got {value!r}") from exc
    if any(size < 1 for size in sizes):
        raise vol.Invalid(f"dimensions must be positive, got {value!r}")
    return sizes


CONFIG_SCHEMA = vol.Schema(
    {
        vol.Required("subcommand"): vol.In(SUBCOMMANDS),
        vol.Optional("input_path", default=None): vol.Any(None, str),
        vol.Optional("output_format", default=None): vol.Any(
            None, vol.In(OUTPUT_FORMATS)
        ),
        vol.Optional("header", default=False): bool,
        vol.Optional("whitespace", default=False): bool,
        vol.Optional("verbose", default=False): bool,
        vol.Optional("center_mode", default=CENTER_COLUMNS): vol.In(
            [CENTER_COLUMNS, CENTER_ROWS, CENTER_BOTH]
        ),
        vol.Optional("group_col", default=None): vol.Any(
            None, All(int, Range(min=0))
        ),
        vol.Optional("rho", default=None): vol.Any(None, finite_float),
        vol.Optional("n", default=None): vol.Any(None, All(int, Range(min=1))),
        vol.Optional("a", default=None): vol.Any(None, finite_float),
        vol.Optional("t", default=None): vol.Any(None, finite_float),
        vol.Optional("fn", default=None): vol.Any(None, matrix_function),
        vol.Optional("tol", default=DEFAULT_TOLERANCE): All(
            finite_float, Range(min=0.0)
        ),
        vol.Optional("n_list", default=tuple(DEFAULT_BENCH_N_LIST)): n_list,
        vol.Optional("trials", default=DEFAULT_BENCH_TRIALS): All(int, Range(min=1)),
        vol.Optional("seed", default=DEFAULT_SEED): All(
            int, Range(min=0, max=MAX_SEED)
        ),
        vol.Optional("max_n", default=DEFAULT_MAX_N): All(int, Range(min=2)),
    }
)


@attr.s(frozen=True, slots=True, auto_attribs=True)
class CliConfig:
    """Validated settings for one CLI run."""

    subcommand: str
    output_format: str
    input_path: str | None = None
    header: bool = False
    whitespace: bool = False
    verbose: bool = False
    center_mode: str = CENTER_COLUMNS
    group_col: int | None = None
    rho: float | None = None
    n: int | None = None
    a: float | None = None
    t: float | None = None
    fn: str | None = None
    tol: float = DEFAULT_TOLERANCE
    n_list: tuple[int, ...] = tuple(DEFAULT_BENCH_N_LIST)
    trials: int = DEFAULT_BENCH_TRIALS
    seed: int = DEFAULT_SEED
    max_n: int = DEFAULT_MAX_N


def build_config(options: dict[str, Any]) -> CliConfig:
    """Validate raw options into a CliConfig."""
    try:
        validated = CONFIG_SCHEMA(
            {key: value for key, value in options.items() if value is not None}
        )
    except vol.Invalid as exc:
        _LOGGER.error("Invalid options: %s", exc)
        raise InvalidParameterError(f"Invalid options: {exc}") from exc

    if validated["output_format"] is None:
        validated["output_format"] = DEFAULT_FORMATS[validated["subcommand"]]
    return CliConfig(**validated)
