"""Batch command-line front end: scenario files, sweeps, CSV and figure presets."""
from .config import ScenarioConfig, SweepSpec, parse_config
from .figures import FIGURES, reproduce_figure
from .sweep import ResultTable, SweepError, emit_csv, evaluate_point, run_sweep

__all__ = [
    "ScenarioConfig",
    "SweepSpec",
    "parse_config",
    "ResultTable",
    "SweepError",
    "run_sweep",
    "evaluate_point",
    "emit_csv",
    "reproduce_figure",
    "FIGURES",
]
