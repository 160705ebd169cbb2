"""Separate cascaded-channel estimation for RIS-assisted MIMO links.

Models every reflecting element as a keyhole (a rank-one scatterer),
estimates the transmit-side and receive-side links separately from the
eigendecompositions of the received pilot block's two Gram matrices, and
provides a seeded Monte Carlo harness for NMSE-vs-SNR and pilot-overhead
studies.
"""

from .channel import ChannelRealization, RisConfig, draw_channels, effective_channel, keyhole_channel
from .estimators import (
    FeasibilityError,
    NoisyObservation,
    SeparateEstimate,
    estimate_effective_ls,
    estimate_enhanced,
    estimate_separate,
    estimate_subgroup,
    lskrf_baseline,
    simulate_rx,
)
from .experiments import ESTIMATORS, ExperimentConfig, ExperimentRecord, run_sweep, run_trial
from .linalg import EvdResult, SvdResult, hermitian_evd, numerical_rank, svd
from .metrics import (
    OverheadReport,
    aligned_nmse_columns,
    aligned_nmse_rows,
    nmse,
    nmse_phase_aligned,
    overhead,
)
from .pilots import (
    PilotBlock,
    SubgroupPlan,
    build_pilot,
    lskrf_schedule,
    ris_schedule,
    subgroup_plan,
)

__all__ = [
    "ChannelRealization",
    "RisConfig",
    "draw_channels",
    "effective_channel",
    "keyhole_channel",
    "FeasibilityError",
    "NoisyObservation",
    "SeparateEstimate",
    "estimate_effective_ls",
    "estimate_enhanced",
    "estimate_separate",
    "estimate_subgroup",
    "lskrf_baseline",
    "simulate_rx",
    "ESTIMATORS",
    "ExperimentConfig",
    "ExperimentRecord",
    "run_sweep",
    "run_trial",
    "EvdResult",
    "SvdResult",
    "hermitian_evd",
    "numerical_rank",
    "svd",
    "OverheadReport",
    "aligned_nmse_columns",
    "aligned_nmse_rows",
    "nmse",
    "nmse_phase_aligned",
    "overhead",
    "PilotBlock",
    "SubgroupPlan",
    "build_pilot",
    "lskrf_schedule",
    "ris_schedule",
    "subgroup_plan",
]

__version__ = "0.1.0"
