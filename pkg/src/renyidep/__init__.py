"""Renyi-order dependence measures J_alpha and K_alpha on finite joint PMFs."""

from .prob_core import (
    AlphaOrder,
    ConditionalPmf,
    JointPmf,
    Pmf,
    PmfError,
    apply_channel,
    marginal_x,
    marginal_y,
    tilt_joint,
    tilt_pmf,
)
from .info_measures import (
    kl_decomposition_check,
    kl_divergence,
    min_entropy,
    mutual_information,
    relative_alpha_entropy,
    renyi_divergence,
    renyi_entropy,
    shannon_entropy,
)
from .dependence_solver import (
    DualResult,
    MeasureResult,
    SolverConfig,
    brute_force_oracle,
    compute_j_alpha,
    compute_k_alpha,
    j_dual_certificate,
    j_dual_value,
    j_objective_reduced,
    j_self_closed_form,
    k_self_closed_form,
    optimal_qy_given_qx,
)

__version__ = "0.1.0"
