"""Experiment runner, acceptance suite and command-line interface."""

from .config import ExperimentConfig, build_config, read_config_file
from .experiments import (
    run_experiment,
    run_hist,
    run_rng_count,
    run_sample,
    run_steps_vs_dim,
    run_steps_vs_eps,
    run_steps_vs_level,
    run_validate,
)
from .output import Table, read_csv, read_json, to_csv, to_json
from .validation import CRITERIA, CriterionResult, run_validation

__all__ = [
    "ExperimentConfig",
    "build_config",
    "read_config_file",
    "run_experiment",
    "run_sample",
    "run_hist",
    "run_steps_vs_eps",
    "run_steps_vs_dim",
    "run_steps_vs_level",
    "run_rng_count",
    "run_validate",
    "Table",
    "to_csv",
    "to_json",
    "read_csv",
    "read_json",
    "CRITERIA",
    "CriterionResult",
    "run_validation",
]
