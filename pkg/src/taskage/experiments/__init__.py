"""Experiment drivers: configuration, sweeps, comparisons, CLI."""

from .config import (CompareConfig, ControllerSection, CurvesConfig,
                     ExperimentConfig, SweepSpec, ValidateConfig, load_config)
from .seeds import derive_seed
from .sweeps import (ResultRow, compare_dynamic, fit_curve_rows,
                     resolve_curves, run_sweep, run_validation)

__all__ = [
    "CompareConfig", "ControllerSection", "CurvesConfig", "ExperimentConfig",
    "SweepSpec", "ValidateConfig", "load_config", "derive_seed", "ResultRow",
    "compare_dynamic", "fit_curve_rows", "resolve_curves", "run_sweep",
    "run_validation",
]
