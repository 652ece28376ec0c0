"""Min-entropies, channels, Choi states and the decoupling experiment."""

from .channels import (
    KrausChannel,
    PartialTraceChannel,
    apply_channel,
    choi_factor,
    choi_state,
    completely_depolarizing_channel,
    identity_channel,
    partial_trace_channel,
)
from .decoupling import DecouplingConfig, choi_cond_hmin, decoupling_experiment, decoupling_threshold
from .minentropy import MinEntropyResult, cond_hmin, cond_hmin_factor, hmin

__all__ = [
    "KrausChannel",
    "PartialTraceChannel",
    "apply_channel",
    "choi_factor",
    "choi_state",
    "completely_depolarizing_channel",
    "identity_channel",
    "partial_trace_channel",
    "DecouplingConfig",
    "choi_cond_hmin",
    "decoupling_experiment",
    "decoupling_threshold",
    "MinEntropyResult",
    "cond_hmin",
    "cond_hmin_factor",
    "hmin",
]
