"""Constants for dcmatrix."""

import numpy as np

# Base package constants
NAME = "dcmatrix"
VERSION = "1.0.0"

STARTUP_MESSAGE = """
-------------------------------------------------------------------
%s
Version: %s
Double-constant matrix algebra and its statistical applications.
-------------------------------------------------------------------
"""

# Tolerances
MACHINE_EPS = float(np.finfo(np.float64).eps)
EIGENVALUE_RTOL = 16 * MACHINE_EPS
DEFAULT_TOLERANCE = 0.0
IMAGINARY_RESIDUE_TOLERANCE = 1e-10
GEOMETRIC_SUM_TOLERANCE = 1e-12
SS_IDENTITY_RTOL = 1e-9
SS_CLAMP_TOLERANCE = 1e-12
RANK_PIVOT_RTOL = 1e-10
SOLVE_PIVOT_RTOL = 1e-12

# Eigenvalue names (reported by domain errors)
LAMBDA_MAJOR = "lambda_major"
LAMBDA_MINOR = "lambda_minor"

# Matrix classes
CLASS_ZERO = "zero"
CLASS_NON_ZERO_CONSTANT = "non_zero_constant"
CLASS_SCALED_IDENTITY = "scaled_identity"
CLASS_CENTERING_PROPORTIONAL = "centering_proportional"
CLASS_POSITIVE_DEFINITE = "positive_definite"
CLASS_NEGATIVE_DEFINITE = "negative_definite"
CLASS_INDEFINITE = "indefinite"

# Exit codes
EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_DATA_SHAPE_ERROR = 3
EXIT_DOMAIN_ERROR = 4

# Subcommands
SUBCOMMAND_CENTER = "center"
SUBCOMMAND_SS_DECOMP = "ss-decomp"
SUBCOMMAND_VARIANCE = "variance"
SUBCOMMAND_MATFUN = "matfun"
SUBCOMMAND_CLASSIFY = "classify"
SUBCOMMAND_BENCH = "bench"
SUBCOMMAND_VERIFY = "verify"
SUBCOMMANDS = [
    SUBCOMMAND_CENTER,
    SUBCOMMAND_SS_DECOMP,
    SUBCOMMAND_VARIANCE,
    SUBCOMMAND_MATFUN,
    SUBCOMMAND_CLASSIFY,
    SUBCOMMAND_BENCH,
    SUBCOMMAND_VERIFY,
]

# Output formats
FORMAT_JSON = "json"
FORMAT_CSV = "csv"
OUTPUT_FORMATS = [FORMAT_JSON, FORMAT_CSV]

# Centering modes
CENTER_COLUMNS = "columns"
CENTER_ROWS = "rows"
CENTER_BOTH = "both"

# Matrix functions
MATFUN_INV = "inv"
MATFUN_SQRT = "sqrt"
MATFUN_EXP = "exp"
MATFUN_LOG = "log"
MATFUN_POW_PREFIX = "pow:"
MATFUNS = [MATFUN_INV, MATFUN_SQRT, MATFUN_EXP, MATFUN_LOG]

# Benchmarks
BENCH_CSV_HEADER = "n,op,structured_ns,dense_ns,speedup"
BENCH_OP_APPLY = "apply"
BENCH_OP_INVERSE = "inverse"
BENCH_OP_PRODUCT = "product"
BENCH_OPS = [BENCH_OP_APPLY, BENCH_OP_INVERSE, BENCH_OP_PRODUCT]
DEFAULT_BENCH_N_LIST = [4, 16, 64, 256]
DEFAULT_BENCH_TRIALS = 5

# Verification defaults
DEFAULT_SEED = 20191203
DEFAULT_MAX_N = 32
DEFAULT_VERIFY_TRIALS = 500
FOURIER_CHECK_MAX_N = 64
MIN_MONTE_CARLO_TRIALS = 1000

# Number formatting
SIGNIFICANT_DIGITS = 17

# Equicorrelation range bounds
RHO_LOWER_BOUND = "lower"
RHO_UPPER_BOUND = "upper"

# Default output format per subcommand
DEFAULT_FORMATS = {
    SUBCOMMAND_CENTER: FORMAT_CSV,
    SUBCOMMAND_SS_DECOMP: FORMAT_JSON,
    SUBCOMMAND_VARIANCE: FORMAT_JSON,
    SUBCOMMAND_MATFUN: FORMAT_JSON,
    SUBCOMMAND_CLASSIFY: FORMAT_JSON,
    SUBCOMMAND_BENCH: FORMAT_CSV,
    SUBCOMMAND_VERIFY: FORMAT_JSON,
}
MAX_SEED = 2**64 - 1

# Logging
LOG_FORMAT = "%(levelname)s: %(message)s"
