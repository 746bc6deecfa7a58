"""Wavelet-domain sparse reconstruction with tree-structured group penalties.

Building blocks: an orthonormal multilevel Haar transform (`dwt`),
matrix-free sensing/blur operators with exact adjoints (`linop`),
parent-child coefficient grouping and replication (`grouping`), the sparsity
penalties and their proximal operators (`penalty`), a Barzilai-Borwein
proximal-gradient solver (`solver`), and a reproducible benchmark harness
(`bench`, CLI entry point ``bench``).
"""

from .backend import BACKEND, COMPILED
from .dwt import (
    CoeffVector,
    Layout1D,
    Layout2D,
    ORIENTATIONS,
    forward,
    forward2d,
    inverse,
    inverse2d,
)
from .grouping import (
    GroupStructure,
    ReplicationMap,
    build_binary_tree,
    build_quadtree,
    make_groups,
    make_replication_map,
)
from .linop import (
    BlurKernel,
    GaussianMatrix,
    LinearOperator,
    adjoint_mismatch,
    compose_with_synthesis,
    gaussian_blur,
    gaussian_sensing,
    identity,
    replicate_columns,
    spectral_norm_estimate,
)
from .penalty import (
    PenaltySpec,
    eval_group,
    eval_l1,
    latent_group_norm,
    penalty_ratio,
    prox_group,
    prox_l1,
    scramble_details,
)
from .solver import (
    KKTReport,
    Problem,
    SolveReport,
    SolverConfig,
    check_kkt,
    lasso_problem,
    ogl_problem,
    oglr_problem,
    smooth_value_grad,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "COMPILED",
    "BlurKernel",
    "CoeffVector",
    "GaussianMatrix",
    "GroupStructure",
    "KKTReport",
    "Layout1D",
    "Layout2D",
    "LinearOperator",
    "ORIENTATIONS",
    "PenaltySpec",
    "Problem",
    "ReplicationMap",
    "SolveReport",
    "SolverConfig",
    "adjoint_mismatch",
    "build_binary_tree",
    "build_quadtree",
    "check_kkt",
    "compose_with_synthesis",
    "eval_group",
    "eval_l1",
    "forward",
    "forward2d",
    "gaussian_blur",
    "gaussian_sensing",
    "identity",
    "inverse",
    "inverse2d",
    "lasso_problem",
    "latent_group_norm",
    "make_groups",
    "make_replication_map",
    "ogl_problem",
    "oglr_problem",
    "penalty_ratio",
    "prox_group",
    "prox_l1",
    "replicate_columns",
    "scramble_details",
    "smooth_value_grad",
    "solve",
    "spectral_norm_estimate",
]
