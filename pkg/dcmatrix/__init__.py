"""Double-constant matrix algebra and its statistical applications.

A double-constant matrix has one value on the diagonal and another value
everywhere else. The package stores such a matrix as (n, a, t) and runs its
algebra, spectral theory and statistics in closed form.
"""

from .algebra import (
    AnalyticSpec,
    BlockDecomposition,
    Partition,
    apply_analytic,
    assemble,
    block_decompose,
    block_decompose_centering,
    exp_m,
    inverse,
    linear_combination,
    log_m,
    power,
    product,
    sqrt_principal,
)
from .const import VERSION
from .core import (
    CanonicalForm,
    DoubleConstant,
    MatrixClass,
    apply,
    centering_matrix,
    classify,
    determinant,
    eigenvalues,
    from_eigenvalues,
    identity,
    materialize,
    new,
)
from .exceptions import DoubleConstantError

__version__ = VERSION
