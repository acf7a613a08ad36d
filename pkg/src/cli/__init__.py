from .schemas import (
    CollapseRequest,
    FiniteSizeConfig,
    LevelStatsConfig,
    MBLConfig,
    PhaseDiagramConfig,
    SpectrumConfig,
    TransitionRequest,
    WindingConfig,
)
from .services import CommandService, config_hash

__all__ = [
    "CollapseRequest",
    "CommandService",
    "FiniteSizeConfig",
    "LevelStatsConfig",
    "MBLConfig",
    "PhaseDiagramConfig",
    "SpectrumConfig",
    "TransitionRequest",
    "WindingConfig",
    "config_hash",
]
