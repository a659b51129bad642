"""Experiment orchestration behind the ``qcl`` command."""
from .config import MODES, ExperimentConfig, load_config, parse_config
from .plots import emit_plot_script, find_csvs
from .runner import (
    EXIT_BUDGET,
    EXIT_CONFIG,
    EXIT_INTERNAL,
    EXIT_IO,
    EXIT_OK,
    EXIT_VALIDATION,
    RunResult,
    resolve_out_dir,
    run,
)

__all__ = [
    "EXIT_BUDGET",
    "EXIT_CONFIG",
    "EXIT_INTERNAL",
    "EXIT_IO",
    "EXIT_OK",
    "EXIT_VALIDATION",
    "MODES",
    "ExperimentConfig",
    "RunResult",
    "emit_plot_script",
    "find_csvs",
    "load_config",
    "parse_config",
    "resolve_out_dir",
    "run",
]
