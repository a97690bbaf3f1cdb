from .bias import (
    BiasStats,
    bias_stats,
    joint_bias_stats,
    joint_net_rel_bias,
    net_rel_bias,
    relative_errors,
    signed_relative_errors,
)
from .estimators import (
    estimate_report,
    fit_beta,
    latent_survival_ratios,
    one_step_ratios,
    v1,
    vbar,
    window_count,
    z1,
    zbar,
)
from .moments import beta_from_moments, beta_moments, fit_model3_node_dist

__all__ = [
    "BiasStats",
    "bias_stats",
    "joint_bias_stats",
    "joint_net_rel_bias",
    "net_rel_bias",
    "relative_errors",
    "signed_relative_errors",
    "estimate_report",
    "fit_beta",
    "latent_survival_ratios",
    "one_step_ratios",
    "v1",
    "vbar",
    "window_count",
    "z1",
    "zbar",
    "beta_from_moments",
    "beta_moments",
    "fit_model3_node_dist",
]
