"""Peak-age analytics and simulation for task-oriented status updating.

A transmitter samples a source, encodes each sample into a codeword of
``n_c`` channel uses, and sends it over a noisy channel to a receiver that
runs a classifier on the decoded sample. The receiver's knowledge is only
refreshed when classification succeeds, so freshness is measured by the
peak age of the task output rather than of the raw updates. This package
provides the closed-form means for the underlying M/D/1 queue, a fast
discrete-event simulator with a compiled core, an adaptive codeword-length
controller, and the experiment drivers that tie them together.
"""

from .accuracy import (AccuracyCurve, CurveSource, Dataset, FitResult,
                       ModelKind, ParametricCurve, fit_parametric,
                       load_tables, lookup_pc, save_tables, synth_curve)
from .analytics import (OptimalNc, check_stability, extra_interarrival_mean,
                        md1_components, mean_waiting_time, optimal_nc,
                        paoi_mean, paoti_mean, paoti_mean_compact)
from .controller import ControllerConfig, ControllerState
from .des import ControllerTrace, SimConfig, SimResult, SimStats, run_sim
from .errors import (ConfigError, DivergenceError, InstabilityError,
                     TableParseError, TaskAgeError, TraceOrderError,
                     ValidationError)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "AccuracyCurve", "CurveSource", "Dataset", "FitResult", "ModelKind",
    "ParametricCurve", "fit_parametric", "load_tables", "lookup_pc",
    "save_tables", "synth_curve",
    "OptimalNc", "check_stability", "extra_interarrival_mean",
    "md1_components", "mean_waiting_time", "optimal_nc", "paoi_mean",
    "paoti_mean", "paoti_mean_compact",
    "ControllerConfig", "ControllerState",
    "ControllerTrace", "SimConfig", "SimResult", "SimStats", "run_sim",
    "ConfigError", "DivergenceError", "InstabilityError", "TableParseError",
    "TaskAgeError", "TraceOrderError", "ValidationError",
    "BACKEND", "__version__",
]
