"""Classical statistical mechanics models behind the negativity formulas."""

from .duality import beta_to_p, duality_error, duality_transform
from .exact import (
    energy_histogram,
    logZ_enumerate,
    logZ_gauge2d,
    logZ_ising1d,
    logZ_relations,
    restricted_logZ,
)
from .ising2d import BETA_C as BETA_C_ISING2D
from .ising2d import kaufman_logZ, logZ_ising2d, onsager_f
from .mc import Schedule, logZ_gauge3d_mc, logZ_mc, run_chain
from .models import PartitionResult, StatMechModel, build_model, gauge2d, gauge3d, ising1d, ising2d, ising3d

__all__ = [
    "BETA_C_ISING2D",
    "PartitionResult",
    "Schedule",
    "StatMechModel",
    "beta_to_p",
    "build_model",
    "duality_error",
    "duality_transform",
    "energy_histogram",
    "gauge2d",
    "gauge3d",
    "ising1d",
    "ising2d",
    "ising3d",
    "kaufman_logZ",
    "logZ_enumerate",
    "logZ_gauge2d",
    "logZ_gauge3d_mc",
    "logZ_ising1d",
    "logZ_ising2d",
    "logZ_mc",
    "logZ_relations",
    "onsager_f",
    "restricted_logZ",
    "run_chain",
]
