"""Distortion bounds and simulation for correlated Gaussian sources on a
two-user Gaussian multiple-access channel with causal feedback."""

from .bounds import (
    BoundResult,
    FeasibilityResult,
    below_snr_threshold,
    check_feasibility,
    dstar_below_threshold,
    endpoint_snr_threshold,
    mac_rate_bounds,
    minimax_lower_bound,
    single_user_curve,
    sum_rate_curve,
    uncoded_distortion,
)
from .model import (
    ChannelParams,
    DistortionPair,
    ParameterError,
    SourceParams,
    SymmetricCase,
    snr_threshold,
    validate,
)
from .rate_distortion import (
    Region,
    classify_region,
    conditional_rd,
    diagonal_branch_rate,
    joint_rd,
    symmetric_joint_rd_inverse,
)
from .simulate import (
    DEFAULT_SEED,
    FeedbackEncoder,
    SimConfig,
    SimReport,
    SimulationError,
    UncodedEncoder,
    gen_source,
    mmse_decode_uncoded,
    mmse_gain,
    run_channel,
    simulate_uncoded,
)
from .sweep import COLUMNS, SweepSpec, format_csv, sweep_rows, write_sweep_csv

__all__ = [
    "BoundResult",
    "COLUMNS",
    "ChannelParams",
    "DEFAULT_SEED",
    "DistortionPair",
    "FeasibilityResult",
    "FeedbackEncoder",
    "ParameterError",
    "Region",
    "SimConfig",
    "SimReport",
    "SimulationError",
    "SourceParams",
    "SweepSpec",
    "SymmetricCase",
    "UncodedEncoder",
    "below_snr_threshold",
    "check_feasibility",
    "classify_region",
    "conditional_rd",
    "diagonal_branch_rate",
    "dstar_below_threshold",
    "endpoint_snr_threshold",
    "format_csv",
    "gen_source",
    "joint_rd",
    "mac_rate_bounds",
    "minimax_lower_bound",
    "mmse_decode_uncoded",
    "mmse_gain",
    "run_channel",
    "simulate_uncoded",
    "single_user_curve",
    "snr_threshold",
    "sum_rate_curve",
    "sweep_rows",
    "symmetric_joint_rd_inverse",
    "uncoded_distortion",
    "validate",
    "write_sweep_csv",
]
