"""Experiment orchestration: configs, seeded trial batches, verification and scaling fits."""
from .config import ALGORITHMS, AlgorithmSpec, ConfigError, ExperimentConfig, load_config
from .runner import run_suite, run_trial
from .scaling import LAWS, ScalingFit, fit_groups, fit_scaling
from .verify import SCOPES, VerificationReport, verify
from ..records import read_records, write_records

__all__ = [
    "ALGORITHMS", "AlgorithmSpec", "ConfigError", "ExperimentConfig", "LAWS", "SCOPES",
    "ScalingFit", "VerificationReport", "fit_groups", "fit_scaling", "load_config",
    "read_records", "run_suite", "run_trial", "verify", "write_records",
]
