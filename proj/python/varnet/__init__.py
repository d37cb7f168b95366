"""Variation-constrained feedforward networks with l1-projected training."""

from ._varnet import (
    CheckpointError,
    Network,
    RiskEstimate,
    SlopeFit,
    Teacher,
    VariationReport,
    build_network,
    empirical_loss,
    fit_loglog_slope,
    forward,
    forward_batch,
    gradient,
    hidden_states,
    l1_norm,
    linear_teacher,
    load_network,
    net_teacher,
    network_from_json,
    network_to_json,
    preset,
    project_l1_ball,
    rademacher_estimate,
    risk_l1,
    risk_l2,
    run_sweep,
    sample_dataset,
    save_network,
    train,
    variation,
)

__all__ = [
    "CheckpointError",
    "Network",
    "RiskEstimate",
    "SlopeFit",
    "Teacher",
    "VariationReport",
    "build_network",
    "empirical_loss",
    "fit_loglog_slope",
    "forward",
    "forward_batch",
    "gradient",
    "hidden_states",
    "l1_norm",
    "linear_teacher",
    "load_network",
    "net_teacher",
    "network_from_json",
    "network_to_json",
    "preset",
    "project_l1_ball",
    "rademacher_estimate",
    "risk_l1",
    "risk_l2",
    "run_sweep",
    "sample_dataset",
    "save_network",
    "train",
    "variation",
]
