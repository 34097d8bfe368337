"""TOML experiment configuration with per-verb defaults.

A config file is optional; every verb runs with built-in defaults (arrival
rate 0.09, codeword length 5, SNR grid {0, 3, 5} dB, horizon 200000
events, preset accuracy curves). Unknown sections or keys are rejected so
typos fail loudly instead of silently running the defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from ..accuracy import Dataset, ModelKind
from ..controller import ControllerConfig
from ..des import BINDINGS
from ..errors import ConfigError

SWEEP_MODES = ("closed_form", "simulation", "both")

DEFAULT_PAIRS = ((Dataset.MNIST, ModelKind.FNN),
                 (Dataset.MNIST, ModelKind.CNN),
                 (Dataset.CIFAR10, ModelKind.CNN))
DEFAULT_SNR_GRID = (0.0, 3.0, 5.0)

# Per-verb grid defaults: the length sweep scans n_c at one arrival rate,
# the rate sweep scans arrival rates at one n_c.
NC_SWEEP_LAMBDAS = (0.09,)
NC_SWEEP_GRID = tuple(range(1, 17))
LAMBDA_SWEEP_LAMBDAS = tuple(round(0.01 * i, 2) for i in range(1, 20))
LAMBDA_SWEEP_NC = (5,)


@dataclass(frozen=True)
class SweepSpec:
    """Fully resolved sweep request (grids already defaulted per verb)."""

    lambda_grid: tuple
    n_c_grid: tuple
    snr_grid_db: tuple
    pairs: tuple
    horizon: int = 200_000
    replications: int = 1
    base_seed: int = 0
    mode: str = "both"
    warmup_frac: float = 0.01

    def __post_init__(self):
        for name in ("lambda_grid", "n_c_grid", "snr_grid_db", "pairs"):
            if len(getattr(self, name)) == 0:
                raise ConfigError(f"{name} must not be empty")
        if any(lam <= 0 for lam in self.lambda_grid):
            raise ConfigError("arrival rates must be positive")
        if any(n < 1 for n in self.n_c_grid):
            raise ConfigError("n_c grid entries must be >= 1")
        if self.horizon < 1:
            raise ConfigError(f"horizon must be >= 1, got {self.horizon}")
        if self.replications < 1:
            raise ConfigError(
                f"replications must be >= 1, got {self.replications}")
        if self.mode not in SWEEP_MODES:
            raise ConfigError(
                f"mode must be one of {SWEEP_MODES}, got {self.mode!r}")
        if not 0.0 <= self.warmup_frac < 0.5:
            raise ConfigError(
                f"warmup_frac must lie in [0, 0.5), got {self.warmup_frac}")


@dataclass(frozen=True)
class _SweepOverrides:
    lambda_grid: tuple | None = None
    n_c_grid: tuple | None = None
    snr_grid_db: tuple | None = None
    pairs: tuple | None = None
    horizon: int = 200_000
    replications: int = 1
    mode: str = "both"
    warmup_frac: float = 0.01


@dataclass(frozen=True)
class CurvesConfig:
    source: str = "preset"
    table: str | None = None

    def __post_init__(self):
        if self.source not in ("preset", "table"):
            raise ConfigError(
                f"curves source must be 'preset' or 'table', got "
                f"{self.source!r}")
        if self.source == "table" and not self.table:
            raise ConfigError("curves source 'table' needs a table path")


@dataclass(frozen=True)
class ControllerSection:
    """Controller tuning plus when the adapted length takes effect."""

    controller: ControllerConfig
    binding: str = "service_start"
    start_n_c: int = 5

    def __post_init__(self):
        if self.binding not in BINDINGS:
            raise ConfigError(
                f"binding must be one of {BINDINGS}, got {self.binding!r}")
        if not (self.controller.n_c_min <= self.start_n_c
                <= self.controller.n_c_max):
            raise ConfigError(
                f"start_n_c={self.start_n_c} outside "
                f"[{self.controller.n_c_min}, {self.controller.n_c_max}]")


@dataclass(frozen=True)
class CompareConfig:
    """Adaptive-versus-fixed comparison grid.

    ``utilization_cap`` bounds the controller's search ceiling per arrival
    rate: codeword lengths that load the queue beyond it are excluded,
    since peaks measured near saturation reflect backlog rather than the
    codeword choice.
    """

    fixed_n_c: int = 5
    lambda_grid: tuple = (0.09, 0.13, 0.17, 0.19)
    horizon: int = 200_000
    utilization_cap: float = 0.85

    def __post_init__(self):
        if self.fixed_n_c < 1:
            raise ConfigError(f"fixed_n_c must be >= 1, got {self.fixed_n_c}")
        if len(self.lambda_grid) == 0:
            raise ConfigError("lambda_grid must not be empty")
        worst = max(self.lambda_grid) * self.fixed_n_c
        if worst >= 1.0:
            raise ConfigError(
                f"fixed reference is unstable: max(lambda) * fixed_n_c = "
                f"{worst:g} >= 1")
        if self.horizon < 1:
            raise ConfigError(f"horizon must be >= 1, got {self.horizon}")
        if not 0.0 < self.utilization_cap < 1.0:
            raise ConfigError(
                f"utilization_cap must lie in (0, 1), got "
                f"{self.utilization_cap}")


@dataclass(frozen=True)
class ValidateConfig:
    cells: int = 12
    horizon: int = 100_000
    replications: int = 3
    service_bias: float = 0.0

    def __post_init__(self):
        if self.cells < 1:
            raise ConfigError(f"cells must be >= 1, got {self.cells}")
        if self.horizon < 1 or self.replications < 1:
            raise ConfigError("horizon and replications must be >= 1")


@dataclass(frozen=True)
class ExperimentConfig:
    base_seed: int = 0
    sweep: _SweepOverrides = _SweepOverrides()
    curves: CurvesConfig = CurvesConfig()
    controller: ControllerSection = ControllerSection(
        ControllerConfig(sign_mode="descent", n_c_max=16))
    compare: CompareConfig = CompareConfig()
    validate: ValidateConfig = ValidateConfig()


def _require_keys(section, data, allowed):
    unknown = set(data) - set(allowed)
    if unknown:
        raise ConfigError(
            f"unknown key {sorted(unknown)[0]!r} in [{section}] "
            f"(allowed: {', '.join(sorted(allowed))})")


def _parse_pairs(raw):
    pairs = []
    for entry in raw:
        if len(entry) != 2:
            raise ConfigError(f"each pair must be [dataset, model], got {entry!r}")
        try:
            pairs.append((Dataset(entry[0]), ModelKind(entry[1])))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return tuple(pairs)


def _parse_sweep(data):
    _require_keys("sweep", data, {"lambda", "n_c", "snr_db", "pairs",
                                  "horizon", "replications", "mode",
                                  "warmup_frac"})
    kwargs = {}
    if "lambda" in data:
        kwargs["lambda_grid"] = tuple(float(x) for x in data["lambda"])
    if "n_c" in data:
        kwargs["n_c_grid"] = tuple(int(x) for x in data["n_c"])
    if "snr_db" in data:
        kwargs["snr_grid_db"] = tuple(float(x) for x in data["snr_db"])
    if "pairs" in data:
        kwargs["pairs"] = _parse_pairs(data["pairs"])
    for key in ("horizon", "replications"):
        if key in data:
            kwargs[key] = int(data[key])
    if "mode" in data:
        kwargs["mode"] = str(data["mode"])
    if "warmup_frac" in data:
        kwargs["warmup_frac"] = float(data["warmup_frac"])
    return _SweepOverrides(**kwargs)


def _parse_controller(data):
    allowed = {"sign_mode", "ewma_beta", "allow_zero_step", "n_c_min",
               "n_c_max", "binding", "start_n_c"}
    _require_keys("controller", data, allowed)
    beta = data.get("ewma_beta")
    if beta is not None:
        beta = float(beta)
        if beta == 0.0:
            beta = None
    cc = ControllerConfig(
        sign_mode=str(data.get("sign_mode", "descent")),
        ewma_beta=beta,
        allow_zero_step=bool(data.get("allow_zero_step", False)),
        n_c_min=int(data.get("n_c_min", 1)),
        n_c_max=int(data.get("n_c_max", 16)),
    )
    return ControllerSection(cc, binding=str(data.get("binding",
                                                      "service_start")),
                             start_n_c=int(data.get("start_n_c", 5)))


def _parse_simple(section, data, cls):
    allowed = {f.name for f in fields(cls)}
    _require_keys(section, data, allowed)
    kwargs = {}
    for f in fields(cls):
        if f.name not in data:
            continue
        value = data[f.name]
        if f.name == "lambda_grid":
            value = tuple(float(x) for x in value)
        elif isinstance(value, bool):
            pass
        elif f.name in ("fixed_n_c", "horizon", "cells", "replications"):
            value = int(value)
        elif f.name in ("service_bias", "utilization_cap"):
            value = float(value)
        kwargs[f.name] = value
    return cls(**kwargs)


def load_config(path=None):
    """Parse a TOML experiment config; ``None`` returns the defaults."""
    if path is None:
        return ExperimentConfig()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    _require_keys("top level", data, {"base_seed", "sweep", "curves",
                                      "controller", "compare", "validate"})
    try:
        curves_data = dict(data.get("curves", {}))
        _require_keys("curves", curves_data, {"source", "table"})
        return ExperimentConfig(
            base_seed=int(data.get("base_seed", 0)),
            sweep=_parse_sweep(dict(data.get("sweep", {}))),
            curves=CurvesConfig(
                source=str(curves_data.get("source", "preset")),
                table=curves_data.get("table")),
            controller=_parse_controller(dict(data.get("controller", {}))),
            compare=_parse_simple("compare", dict(data.get("compare", {})),
                                  CompareConfig),
            validate=_parse_simple("validate", dict(data.get("validate", {})),
                                   ValidateConfig),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from None


def build_sweep_spec(config, verb):
    """Resolve the sweep grids for ``verb`` (``nc`` or ``lambda``)."""
    ov = config.sweep
    if verb == "nc":
        lambdas = ov.lambda_grid or NC_SWEEP_LAMBDAS
        ncs = ov.n_c_grid or NC_SWEEP_GRID
    elif verb == "lambda":
        lambdas = ov.lambda_grid or LAMBDA_SWEEP_LAMBDAS
        ncs = ov.n_c_grid or LAMBDA_SWEEP_NC
    else:
        raise ConfigError(f"unknown sweep verb {verb!r}")
    return SweepSpec(
        lambda_grid=lambdas,
        n_c_grid=ncs,
        snr_grid_db=ov.snr_grid_db or DEFAULT_SNR_GRID,
        pairs=ov.pairs or DEFAULT_PAIRS,
        horizon=ov.horizon,
        replications=ov.replications,
        base_seed=config.base_seed,
        mode=ov.mode,
        warmup_frac=ov.warmup_frac,
    )
