"""Command-line interface for dcmatrix."""

from __future__ import annotations

import argparse
from collections.abc import Callable, Sequence
import csv
import io
import json
import logging
import math
import sys
from typing import Any, TextIO

import numpy as np

from . import algebra, core, stats
from .bench import format_rows, run_benchmark
from .config import CliConfig, build_config
from .const import (
    CENTER_BOTH,
    CENTER_ROWS,
    DEFAULT_VERIFY_TRIALS,
    EXIT_OK,
    EXIT_PARSE_ERROR,
    EXIT_VERIFY_FAILED,
    FORMAT_JSON,
    LOG_FORMAT,
    MATFUN_EXP,
    MATFUN_INV,
    MATFUN_LOG,
    MATFUN_POW_PREFIX,
    MATFUN_SQRT,
    NAME,
    OUTPUT_FORMATS,
    SIGNIFICANT_DIGITS,
    STARTUP_MESSAGE,
    SUBCOMMAND_BENCH,
    SUBCOMMAND_CENTER,
    SUBCOMMAND_CLASSIFY,
    SUBCOMMAND_MATFUN,
    SUBCOMMAND_SS_DECOMP,
    SUBCOMMAND_VARIANCE,
    SUBCOMMAND_VERIFY,
    VERSION,
)
from .exceptions import (
    DimensionMismatchError,
    DoubleConstantError,
    EmptyInputError,
    ParseError,
)
from .verify import run_verify

_LOGGER: logging.Logger = logging.getLogger(__name__)

Rows = list[tuple[int, list[str]]]
Runner = Callable[[CliConfig, TextIO, TextIO], int]


def format_number(value: Any) -> str:
    """Render a number: integers verbatim, floats with 17 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    number = float(value)
    if not math.isfinite(number):
        return "null"
    # + 0.0 turns -0.0 into 0.0
    return format(number + 0.0, f".{SIGNIFICANT_DIGITS}g")


def to_json(value: Any) -> str:
    """Serialize a payload of dicts, sequences, strings and numbers."""
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(str(value))
    if isinstance(value, dict):
        items = (
            f"{json.dumps(str(key))}: {to_json(item)}" for key, item in value.items()
        )
        return "{" + ", ".join(items) + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(to_json(item) for item in value) + "]"
    return format_number(value)


def write_payload(payload: dict[str, Any], output_format: str, stdout: TextIO) -> None:
    """Write a key/value payload as one JSON object or as key,value lines."""
    if output_format == FORMAT_JSON:
        stdout.write(to_json(payload) + "\n")
        return
    for key, value in payload.items():
        if isinstance(value, (list, tuple)):
            fields = [format_number(item) for item in value]
        elif value is None:
            fields = [""]
        elif isinstance(value, str):
            fields = [value]
        else:
            fields = [format_number(value)]
        stdout.write(",".join([key, *fields]) + "\n")


def read_input(config: CliConfig, stdin: TextIO) -> str:
    """Read the input file, or standard input when no path is given."""
    if config.input_path in (None, "-"):
        try:
            return stdin.read()
        except (OSError, UnicodeDecodeError) as exc:
            raise ParseError(f"Cannot read standard input: {exc}") from exc
    try:
        with open(config.input_path, encoding="utf-8") as handle:
            return handle.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"Cannot read {config.input_path}: {exc}") from exc


def split_rows(text: str, config: CliConfig) -> Rows:
    """Split text into (line number, fields); blank lines have no fields."""
    if config.whitespace:
        rows = [
            (number, line.split())
            for number, line in enumerate(text.splitlines(), start=1)
        ]
    else:
        reader = csv.reader(io.StringIO(text))
        rows = []
        try:
            for fields in reader:
                stripped = [field.strip() for field in fields]
                rows.append((reader.line_num, stripped if any(stripped) else []))
        except csv.Error as exc:
            raise ParseError(str(exc), reader.line_num, 1) from exc

    if config.header:
        for index, (_, fields) in enumerate(rows):
            if fields:
                del rows[index]
                break
    return rows


def parse_number(field: str, line: int, column: int) -> float:
    """Parse one finite number."""
    try:
        value = float(field)
    except ValueError as exc:
        raise ParseError(f"invalid number {field!r}", line, column) from exc
    if not math.isfinite(value):
        raise ParseError(f"non-finite number {field!r}", line, column)
    return value


def parse_matrix(rows: Rows) -> np.ndarray:
    """Parse the non-blank rows into a rectangular matrix."""
    data: list[list[float]] = []
    width = None
    for line, fields in rows:
        if not fields:
            continue
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise DimensionMismatchError(
                f"line {line}: expected {width} fields, got {len(fields)}"
            )
        data.append(
            [
                parse_number(field, line, column)
                for column, field in enumerate(fields, 1)
            ]
        )
    if not data:
        raise EmptyInputError("Input contains no data")
    return np.array(data, dtype=np.float64)


def parse_groups(rows: Rows, group_col: int | None) -> list[list[float]]:
    """Parse groups separated by blank lines, or keyed by a label column."""
    if group_col is not None:
        labelled: dict[str, list[float]] = {}
        for line, fields in rows:
            if not fields:
                continue
            if group_col >= len(fields) or len(fields) != 2:
                raise DimensionMismatchError(
                    f"line {line}: expected a label and one value, "
                    f"got {len(fields)} fields"
                )
            value_col = 1 - group_col
            labelled.setdefault(fields[group_col], []).append(
                parse_number(fields[value_col], line, value_col + 1)
            )
        return list(labelled.values())

    while rows and not rows[0][1]:
        rows = rows[1:]
    while rows and not rows[-1][1]:
        rows = rows[:-1]
    groups: list[list[float]] = [[]]
    for line, fields in rows:
        if not fields:
            # a run of blank lines is one separator
            if groups[-1]:
                groups.append([])
            continue
        if len(fields) != 1:
            raise DimensionMismatchError(
                f"line {line}: expected one value per line, got {len(fields)}"
            )
        groups[-1].append(parse_number(fields[0], line, 1))
    return groups


def run_center(config: CliConfig, stdin: TextIO, stdout: TextIO) -> int:
    """Center the columns, the rows, or both, of a numeric matrix."""
    matrix = parse_matrix(split_rows(read_input(config, stdin), config))
    if config.center_mode == CENTER_ROWS:
        centered = stats.center_rows(matrix)
    elif config.center_mode == CENTER_BOTH:
        centered = stats.double_center(matrix)
    else:
        centered = stats.center_columns(matrix)

    if config.output_format == FORMAT_JSON:
        payload = {
            "rows": centered.shape[0],
            "cols": centered.shape[1],
            "data": centered,
        }
        stdout.write(to_json(payload) + "\n")
    else:
        for row in centered:
            stdout.write(",".join(format_number(value) for value in row) + "\n")
    return EXIT_OK


def run_ss_decomp(config: CliConfig, stdin: TextIO, stdout: TextIO) -> int:
    """Decompose the pooled sum of squares of grouped data."""
    rows = split_rows(read_input(config, stdin), config)
    decomposition = stats.pooled_ss_decomposition(parse_groups(rows, config.group_col))
    payload = {
        "pooled_ss": decomposition.pooled_ss,
        "group_ss": list(decomposition.group_ss),
        "group_sizes": list(decomposition.group_sizes.blocks),
        "between_term": decomposition.between_term,
        "between_term_weighted": decomposition.between_term_weighted,
        "identity_residual": decomposition.identity_residual,
    }
    write_payload(payload, config.output_format, stdout)
    return EXIT_OK


def run_variance(config: CliConfig, stdin: TextIO, stdout: TextIO) -> int:
    """Estimate the variance of one column, optionally adjusted for rho."""
    matrix = parse_matrix(split_rows(read_input(config, stdin), config))
    if matrix.shape[1] != 1:
        raise DimensionMismatchError(
            f"variance expects a single column, got {matrix.shape[1]}"
        )
    report = stats.variance_report(matrix[:, 0], config.rho)
    ss = report.ss
    payload: dict[str, Any] = {
        "n": report.n,
        "ss": ss,
        "df": report.df,
        "s2": ss / report.df,
    }
    if config.rho is not None:
        payload.update(
            {
                "rho": report.rho,
                "df_eff_trace": report.df_eff,
                "df_eff_paper": report.df_eff_squared,
                "n_eff_trace": report.n_eff,
                "n_eff_squared": report.n_eff_squared,
                "s2_adjusted": report.variance_estimate,
                "s2_adjusted_squared": ss / report.df_eff_squared,
            }
        )
    write_payload(payload, config.output_format, stdout)
    return EXIT_OK


def _matrix_function(name: str) -> Callable[[core.DoubleConstant], core.DoubleConstant]:
    functions = {
        MATFUN_INV: algebra.inverse,
        MATFUN_SQRT: algebra.sqrt_principal,
        MATFUN_EXP: algebra.exp_m,
        MATFUN_LOG: algebra.log_m,
    }
    if name.startswith(MATFUN_POW_PREFIX):
        y = float(name[len(MATFUN_POW_PREFIX) :])
        return lambda m: algebra.power(m, y)
    return functions[name]


def _matrix_from_config(config: CliConfig) -> core.DoubleConstant:
    return core.new(config.n, config.a, config.t)


def run_matfun(config: CliConfig, stdin: TextIO, stdout: TextIO) -> int:
    """Apply a closed-form matrix function to M(a, t)."""
    m = _matrix_from_config(config)
    result = _matrix_function(config.fn)(m)
    payload = {
        "n": result.n,
        "a_out": result.a,
        "t_out": result.t,
        "lambda_major": result.lambda_major,
        "lambda_minor": result.lambda_minor,
        "class": core.classify(result, config.tol).value,
    }
    write_payload(payload, config.output_format, stdout)
    return EXIT_OK


def run_classify(config: CliConfig, stdin: TextIO, stdout: TextIO) -> int:
    """Classify M(a, t) and report its spectral summary."""
    m = _matrix_from_config(config)
    payload = {
        "n": m.n,
        "a": m.a,
        "t": m.t,
        "lambda_major": m.lambda_major,
        "lambda_minor": m.lambda_minor,
        "class": core.classify(m, config.tol).value,
        "rank": core.rank(m, config.tol),
        "determinant": core.determinant(m),
        "proper": core.is_proper(m, config.tol),
        "non_degenerate": core.is_non_degenerate(m, config.tol),
    }
    write_payload(payload, config.output_format, stdout)
    return EXIT_OK


def run_bench(config: CliConfig, stdin: TextIO, stdout: TextIO) -> int:
    """Time structured against dense operations."""
    rows = run_benchmark(config.n_list, config.trials)
    if config.output_format == FORMAT_JSON:
        payload = {
            "rows": [
                {
                    "n": row.n,
                    "op": row.op,
                    "structured_ns": row.structured_ns,
                    "dense_ns": row.dense_ns,
                    "speedup": row.speedup,
                }
                for row in rows
            ]
        }
        stdout.write(to_json(payload) + "\n")
    else:
        stdout.write("\n".join(format_rows(rows)) + "\n")
    return EXIT_OK


def run_verify_command(config: CliConfig, stdin: TextIO, stdout: TextIO) -> int:
    """Run the invariant suite."""
    report = run_verify(config.seed, config.max_n, trials=DEFAULT_VERIFY_TRIALS)
    if config.output_format == FORMAT_JSON:
        payload = {
            "seed": report.seed,
            "max_n": report.max_n,
            "passed": report.passed,
            "checks": [
                {"name": check.name, "status": check.status, "detail": check.detail}
                for check in report.checks
            ],
        }
        stdout.write(to_json(payload) + "\n")
    else:
        writer = csv.writer(stdout, lineterminator="\n")
        writer.writerow(["name", "status", "detail"])
        for check in report.checks:
            writer.writerow([check.name, check.status, check.detail])

    failure = report.first_failure
    if failure is not None:
        _LOGGER.error("Verification failed: %s", failure.detail)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


RUNNERS: dict[str, Runner] = {
    SUBCOMMAND_CENTER: run_center,
    SUBCOMMAND_SS_DECOMP: run_ss_decomp,
    SUBCOMMAND_VARIANCE: run_variance,
    SUBCOMMAND_MATFUN: run_matfun,
    SUBCOMMAND_CLASSIFY: run_classify,
    SUBCOMMAND_BENCH: run_bench,
    SUBCOMMAND_VERIFY: run_verify_command,
}


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS)
    common.add_argument("--header", action="store_true", help="skip a header row")
    common.add_argument(
        "--ws",
        dest="whitespace",
        action="store_true",
        help="whitespace-delimited input",
    )
    common.add_argument("--verbose", action="store_true", help="log debug output")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument(
        "input_path", nargs="?", help="input file (default: standard input)"
    )

    matrix = argparse.ArgumentParser(add_help=False)
    matrix.add_argument("--n", type=int, required=True)
    matrix.add_argument("--a", type=float, required=True)
    matrix.add_argument("--t", type=float, required=True)
    matrix.add_argument("--tol", type=float, help="zero tolerance for classification")

    parser = argparse.ArgumentParser(
        prog=NAME, description="Double-constant matrix algebra and statistics."
    )
    parser.add_argument("--version", action="version", version=f"{NAME} {VERSION}")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    center = subparsers.add_parser(
        SUBCOMMAND_CENTER, parents=[common, data], help="center a numeric matrix"
    )
    mode = center.add_mutually_exclusive_group()
    mode.add_argument(
        "--rows", dest="center_mode", action="store_const", const=CENTER_ROWS
    )
    mode.add_argument(
        "--both", dest="center_mode", action="store_const", const=CENTER_BOTH
    )

    ss_decomp = subparsers.add_parser(
        SUBCOMMAND_SS_DECOMP,
        parents=[common, data],
        help="decompose a pooled sum of squares",
    )
    ss_decomp.add_argument("--group-col", dest="group_col", type=int)

    variance = subparsers.add_parser(
        SUBCOMMAND_VARIANCE, parents=[common, data], help="estimate a variance"
    )
    variance.add_argument("--rho", type=float, help="equicorrelation of the sample")

    matfun = subparsers.add_parser(
        SUBCOMMAND_MATFUN, parents=[common, matrix], help="apply a matrix function"
    )
    matfun.add_argument("--fn", required=True, help="inv, sqrt, exp, log or pow:<y>")

    subparsers.add_parser(
        SUBCOMMAND_CLASSIFY, parents=[common, matrix], help="classify M(a, t)"
    )

    bench = subparsers.add_parser(
        SUBCOMMAND_BENCH, parents=[common], help="benchmark structured operations"
    )
    bench.add_argument("--n-list", dest="n_list", help="comma separated dimensions")
    bench.add_argument("--trials", type=int)

    verify = subparsers.add_parser(
        SUBCOMMAND_VERIFY, parents=[common], help="run the invariant suite"
    )
    verify.add_argument("--seed", type=int)
    verify.add_argument("--max-n", dest="max_n", type=int)

    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(stream=sys.stderr, format=LOG_FORMAT)
    logging.getLogger(NAME).setLevel(logging.DEBUG if verbose else logging.INFO)


def main(
    argv: Sequence[str] | None = None,
    stdin: TextIO | None = None,
    stdout: TextIO | None = None,
) -> int:
    """Run the command line and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE_ERROR

    _configure_logging(args.verbose)
    _LOGGER.debug(STARTUP_MESSAGE, NAME, VERSION)

    try:
        config = build_config(vars(args))
        return RUNNERS[config.subcommand](
            config, stdin or sys.stdin, stdout or sys.stdout
        )
    except DoubleConstantError as exc:
        _LOGGER.error("%s", exc)
        return exc.exit_code
