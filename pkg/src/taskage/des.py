"""Discrete-event simulation of the status-updating queue.

This layer owns all randomness and statistics; the inner event loops live
in :mod:`taskage.kernels`. Every random quantity is drawn here with numpy
generators before the kernel runs, so results are identical across kernel
backends and reproducible from the seed alone.

Seeding: the base seed spawns three independent child streams (arrivals,
delivery successes, controller steps). ``success_seed`` can replace the
success stream without touching the other two, which lets paired runs
share an arrival sample path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .accuracy import AccuracyCurve, lookup_pc
from .controller import ControllerConfig, _draw_delta
from .errors import InstabilityError, ValidationError

MODES = ("fixed", "adaptive")
BINDINGS = ("service_start", "arrival")

_SIGN_CODE = {"paper": kernels.SIGN_PAPER, "descent": kernels.SIGN_DESCENT}
_BIND_CODE = {"service_start": kernels.BIND_SERVICE_START,
              "arrival": kernels.BIND_ARRIVAL}


@dataclass(frozen=True)
class SimConfig:
    """Inputs of one simulation run.

    ``fixed`` mode serves every update with ``n_c`` channel uses and a
    constant success probability (``p_c`` directly, or the curve evaluated
    at ``n_c``). ``adaptive`` mode starts at ``n_c`` and lets the
    controller move it, reading per-length accuracy from ``curve``.
    ``service_bias`` perturbs the fixed-mode service time; it exists so
    that validation tooling can prove it detects a broken queue.
    """

    lam: float
    n_events: int
    n_c: int = 1
    p_c: float | None = None
    curve: AccuracyCurve | None = None
    mode: str = "fixed"
    seed: int = 0
    success_seed: int | None = None
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    binding: str = "service_start"
    warmup_frac: float = 0.01
    service_bias: float = 0.0

    def __post_init__(self):
        if self.lam <= 0.0:
            raise ValidationError(f"arrival rate must be positive, got {self.lam}")
        if self.n_events < 1:
            raise ValidationError(f"n_events must be >= 1, got {self.n_events}")
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.binding not in BINDINGS:
            raise ValidationError(
                f"binding must be one of {BINDINGS}, got {self.binding!r}")
        if not 0.0 <= self.warmup_frac < 0.5:
            raise ValidationError(
                f"warmup_frac must lie in [0, 0.5), got {self.warmup_frac}")
        if self.n_c < 1:
            raise ValidationError(f"n_c must be >= 1, got {self.n_c}")
        if self.mode == "fixed":
            if (self.p_c is None) == (self.curve is None):
                raise ValidationError(
                    "fixed mode needs exactly one accuracy source: p_c or curve")
            if self.p_c is not None and not 0.0 <= self.p_c <= 1.0:
                raise ValidationError(f"p_c must lie in [0, 1], got {self.p_c}")
        else:
            if self.curve is None:
                raise ValidationError("adaptive mode needs an accuracy curve")
            if self.p_c is not None:
                raise ValidationError("adaptive mode reads accuracy from the "
                                      "curve; do not pass p_c")
            if not (self.controller.n_c_min <= self.n_c
                    <= self.controller.n_c_max):
                raise ValidationError(
                    f"start n_c={self.n_c} outside controller range "
                    f"[{self.controller.n_c_min}, {self.controller.n_c_max}]")

    def resolved_pc(self):
        """Constant success probability of a fixed-mode run."""
        if self.p_c is not None:
            return float(self.p_c)
        return lookup_pc(self.curve, self.n_c)


@dataclass(frozen=True)
class ControllerTrace:
    """One row per controller update: when, to what, by how much, on what."""

    t: np.ndarray
    n_c: np.ndarray
    delta: np.ndarray
    measured_peak: np.ndarray

    def __len__(self):
        return self.t.shape[0]


@dataclass(frozen=True)
class SimStats:
    """Post-warmup summary of one run.

    Confidence half-widths come from 40 batch means at 95% coverage and
    are NaN when too few peaks survive the warmup cut.
    """

    n_events: int
    n_kept: int
    n_success: int
    success_rate: float
    mean_wait: float
    wait_ci: float
    mean_paoi: float
    paoi_ci: float
    mean_paoti: float
    paoti_ci: float
    mean_nc: float


@dataclass(frozen=True)
class SimResult:
    """Arrays of one run (full horizon) plus post-warmup statistics.

    ``paoti_full`` aligns with departures and is NaN where the delivery
    failed; ``paoti_peaks``/``paoti_peak_times`` give the compressed
    successful-peak series.
    """

    config: SimConfig
    backend: str
    t_arrival: np.ndarray
    t_start: np.ndarray
    t_depart: np.ndarray
    wait: np.ndarray
    success: np.ndarray
    paoi: np.ndarray
    paoti_full: np.ndarray
    n_used: np.ndarray
    ctrl: ControllerTrace | None
    stats: SimStats

    @property
    def paoti_peaks(self):
        return self.paoti_full[self.success.astype(bool)]

    @property
    def paoti_peak_times(self):
        return self.t_depart[self.success.astype(bool)]


def batch_ci(values, n_batches=40, z=1.96):
    """95% half-width from batch means; NaN below 2 points per batch."""
    values = np.asarray(values, dtype=np.float64)
    m = values.shape[0] // n_batches
    if m < 2:
        return math.nan
    batches = values[: m * n_batches].reshape(n_batches, m).mean(axis=1)
    return float(z * batches.std(ddof=1) / math.sqrt(n_batches))


def _make_streams(config):
    root = np.random.SeedSequence(config.seed)
    arrival_ss, success_ss, ctrl_ss = root.spawn(3)
    if config.success_seed is not None:
        success_ss = np.random.SeedSequence(config.success_seed)
    return (np.random.Generator(np.random.PCG64(arrival_ss)),
            np.random.Generator(np.random.PCG64(success_ss)),
            np.random.Generator(np.random.PCG64(ctrl_ss)))


def _pc_table(curve, n_c_max):
    """Per-length success probabilities, indexed by n_c (entry 0 unused)."""
    table = np.zeros(n_c_max + 1, dtype=np.float64)
    for n in range(1, n_c_max + 1):
        table[n] = lookup_pc(curve, n)
    return table


def _stats(config, wait, success, paoi, paoti_full, n_used):
    n = wait.shape[0]
    cut = int(math.ceil(config.warmup_frac * n))
    keep = slice(cut, None)
    ok = success[keep].astype(bool)
    peaks = paoti_full[keep][ok]
    n_success = int(ok.sum())
    return SimStats(
        n_events=n,
        n_kept=n - cut,
        n_success=n_success,
        success_rate=n_success / max(n - cut, 1),
        mean_wait=float(wait[keep].mean()),
        wait_ci=batch_ci(wait[keep]),
        mean_paoi=float(paoi[keep].mean()),
        paoi_ci=batch_ci(paoi[keep]),
        mean_paoti=float(peaks.mean()) if n_success else math.nan,
        paoti_ci=batch_ci(peaks),
        mean_nc=float(n_used[keep].mean()),
    )


def run_sim(config):
    """Simulate one run described by ``config`` and summarize it."""
    arrival_rng, success_rng, ctrl_rng = _make_streams(config)
    y = arrival_rng.exponential(1.0 / config.lam, config.n_events)
    u_success = success_rng.random(config.n_events)

    if config.mode == "fixed":
        service = float(config.n_c) + config.service_bias
        if service <= 0.0:
            raise ValidationError(
                f"service time must be positive, got {service}")
        if config.lam * service >= 1.0 and config.service_bias == 0.0:
            raise InstabilityError(config.lam, config.n_c)
        p_c = config.resolved_pc()
        (t_arrival, t_start, t_depart, wait, success, paoi,
         paoti_full) = kernels.simulate_fixed(y, u_success, service, p_c)
        n_used = np.full(config.n_events, config.n_c, dtype=np.int64)
        ctrl = None
    else:
        cc = config.controller
        table = _pc_table(config.curve, cc.n_c_max)
        delta0 = _draw_delta(ctrl_rng.random(), cc.allow_zero_step)
        u_delta = ctrl_rng.random(config.n_events)
        beta = cc.ewma_beta if cc.ewma_beta is not None else 0.0
        (t_arrival, t_start, t_depart, wait, success, paoi, paoti_full,
         n_used, ctrl_t, ctrl_nc, ctrl_delta, ctrl_peak, n_ctrl,
         _n_draws) = kernels.simulate_adaptive(
            y, u_success, u_delta, delta0, config.n_c, table,
            _SIGN_CODE[cc.sign_mode], beta, int(cc.allow_zero_step),
            cc.n_c_min, cc.n_c_max, _BIND_CODE[config.binding])
        ctrl = ControllerTrace(ctrl_t[:n_ctrl].copy(), ctrl_nc[:n_ctrl].copy(),
                               ctrl_delta[:n_ctrl].copy(),
                               ctrl_peak[:n_ctrl].copy())

    stats = _stats(config, wait, success, paoi, paoti_full, n_used)
    return SimResult(config=config, backend=kernels.BACKEND,
                     t_arrival=t_arrival, t_start=t_start, t_depart=t_depart,
                     wait=wait, success=success, paoi=paoi,
                     paoti_full=paoti_full, n_used=n_used, ctrl=ctrl,
                     stats=stats)
