"""Partition-of-unity moving least squares with data-dependent blending.

Linear PU-MLS blends local moving least-squares fits with Shepard weights;
the data-dependent variant (DDPU-MLS) rescales those weights by local
smoothness indicators so that fits across a jump are suppressed.
"""

from .ddpu import (
    DDPUFits,
    NonlinearConfig,
    SmoothnessIndicators,
    compute_indicators,
    ddpu_mls_eval,
    nonlinear_weights,
    smoothness_indicator,
    weno_optimal_weights,
)
from .kernels import RadialKernel, ScaledWeight, effective_support_radius, evaluate, kernel_from_token
from .lsq import (
    FitResult,
    WeightedFitProblem,
    solve_spd,
    solve_unweighted_linear,
    solve_weighted,
)
from .partition import (
    Covering,
    LocalFits,
    PuConfig,
    build_covering,
    covering_from_centers,
    local_mls_value,
    pu_mls_eval,
    shepard_weights,
    validate_covering,
)
from .pointsets import (
    DomainBox,
    PointSet,
    eval_grid,
    fill_distance,
    halton_points,
    quasi_uniformity_ratio,
    separation_distance,
    uniform_grid,
    unit_box,
)
from .polybasis import MonomialBasis, basis_size, design_matrix, evaluate_basis
from . import experiments
from .rbf import RbfInterpolant, eval_rbf, fit_rbf, kernel_matrix

__version__ = "0.1.0"
