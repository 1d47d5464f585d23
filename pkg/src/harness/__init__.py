"""Experiment harness: configuration, replicate runner, aggregation and reports."""

from .aggregate import calculate_all_aggregates, calculate_summary
from .bundle import ReplicateRecord, ReportBundle
from .config import (
    BesovQuery,
    ExperimentConfig,
    LndSettings,
    LocalTimeSettings,
    config_from_dict,
    config_hash,
    load_config,
)
from .report import emit_report
from .runner import run_experiment, run_experiment_async, run_replicate, run_replicates

__all__ = [
    "BesovQuery",
    "ExperimentConfig",
    "LndSettings",
    "LocalTimeSettings",
    "ReplicateRecord",
    "ReportBundle",
    "calculate_all_aggregates",
    "calculate_summary",
    "config_from_dict",
    "config_hash",
    "emit_report",
    "load_config",
    "run_experiment",
    "run_experiment_async",
    "run_replicate",
    "run_replicates",
]
