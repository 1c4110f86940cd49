from .bundled import bundled_names, bundled_path
from .episode import (EpisodeResult, MetricsReport, PredictionErrorProfile,
                      aggregate_profile, run_batch, run_episode)
from .scenario import Scenario, ScriptStep, generate_step_inputs, load_scenario
from .stats import ComparisonResult, compare
from .tuning import TuneResult, tune

__all__ = [
    "bundled_names", "bundled_path",
    "EpisodeResult", "MetricsReport", "PredictionErrorProfile",
    "aggregate_profile", "run_batch", "run_episode",
    "Scenario", "ScriptStep", "generate_step_inputs", "load_scenario",
    "ComparisonResult", "compare",
    "TuneResult", "tune",
]
