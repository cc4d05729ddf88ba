"""grasslen: lengths of antisymmetric multivectors.

Exact exterior algebra over C^m (wedge, contraction, duality, a JSON file
format), decomposability and minimal-support rank, exact 2-vector lengths,
alternating-least-squares length estimation for general grades, numeric
secant-variety dimensions of the Grassmannian, and tables of lower/upper
length bounds.
"""

from .bounds import (
    BoundsRecord,
    ExactValue,
    bounds_table,
    exact_value,
    lower_bound_new,
    lower_bound_new_fraction,
    lower_bound_old,
    upper_bound_order,
    write_bounds_csv,
    write_plot_series,
)
from .decomp import (
    DecompCheck,
    DecompTerm,
    RankReport,
    ToleranceError,
    ZeroMultivectorError,
    is_decomposable,
    plucker_residual,
    schmidt_length,
    support_rank,
)
from .defaults import DEFAULT_RANK_TOL, DEFAULT_SEED, DESK_CAP
from .exterior import (
    FormatError,
    GrasslenError,
    Multivector,
    SizeCapError,
    contract,
    dumps,
    exterior_power_matrix,
    hodge_dual,
    load,
    loads,
    save,
    subset_rank,
    subset_unrank,
    subsets,
    transform,
    wedge,
    wedge_slot_matrix,
    wedge_vectors,
)
from .fit import (
    EstimateReport,
    FitOptions,
    FitReport,
    als_fit,
    estimate_length,
    planted_sum,
    random_decomposable,
)
from .secant import (
    GrassmannPoint,
    SecantReport,
    defect_scan,
    expected_projective_dim,
    min_filling_l,
    secant_dim,
    tangent_cone_basis,
    write_secant_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BoundsRecord",
    "DecompCheck",
    "DecompTerm",
    "DEFAULT_RANK_TOL",
    "DEFAULT_SEED",
    "DESK_CAP",
    "EstimateReport",
    "ExactValue",
    "FitOptions",
    "FitReport",
    "FormatError",
    "GrasslenError",
    "GrassmannPoint",
    "Multivector",
    "RankReport",
    "SecantReport",
    "SizeCapError",
    "ToleranceError",
    "ZeroMultivectorError",
    "als_fit",
    "bounds_table",
    "contract",
    "defect_scan",
    "dumps",
    "estimate_length",
    "exact_value",
    "expected_projective_dim",
    "exterior_power_matrix",
    "hodge_dual",
    "is_decomposable",
    "load",
    "loads",
    "lower_bound_new",
    "lower_bound_new_fraction",
    "lower_bound_old",
    "min_filling_l",
    "planted_sum",
    "plucker_residual",
    "random_decomposable",
    "save",
    "schmidt_length",
    "secant_dim",
    "subset_rank",
    "subset_unrank",
    "subsets",
    "support_rank",
    "tangent_cone_basis",
    "transform",
    "upper_bound_order",
    "wedge",
    "wedge_slot_matrix",
    "wedge_vectors",
    "write_bounds_csv",
    "write_plot_series",
    "write_secant_csv",
]
