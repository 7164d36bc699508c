from .schedule import ScheduleParams, update_threshold, ols_slope
from .shots import ShotAllocation, choose_shots_bound, choose_shots_center, shots_for_variance
from .problem import VQEProblem
from .loops import (
    VARIANTS, HyperoptSettings, OptimizerConfig, OptimizerState, StepInfo, TraceRow, OptimizerTrace,
    subscore_step, nft_step, initial_state, run,
)

__all__ = [
    "ScheduleParams", "update_threshold", "ols_slope",
    "ShotAllocation", "choose_shots_bound", "choose_shots_center", "shots_for_variance",
    "VQEProblem",
    "VARIANTS", "HyperoptSettings", "OptimizerConfig", "OptimizerState", "StepInfo", "TraceRow",
    "OptimizerTrace", "subscore_step", "nft_step", "initial_state", "run",
]
