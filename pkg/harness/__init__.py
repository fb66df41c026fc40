from .handlers import ExperimentHandlers
from .schemas import ExperimentConfig, ExperimentRow, ExperimentSummary, RamseyProbeResult

__all__ = [
    "ExperimentConfig",
    "ExperimentHandlers",
    "ExperimentRow",
    "ExperimentSummary",
    "RamseyProbeResult",
]
