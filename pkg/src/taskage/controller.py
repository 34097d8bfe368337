"""Sign-based adaptation of the codeword length from measured age peaks.

The transmitter observes one task-level peak per successful delivery and
nudges ``n_c`` by an integer step after each observation. Only the sign of
the change in the measurement is used, so the rule needs no gradient and no
model of the queue.

Two sign conventions are provided. ``"paper"`` keeps the step direction
when the measurement grew and reverses it when the measurement shrank;
``"descent"`` does the opposite, backing out of moves that made the
measurement worse. The latter converges to the minimizer on a clean
unimodal objective, so experiments default to it, while ``"paper"``
preserves the original rule for side-by-side study.

Ties, a zero previous step, and the very first update all fall back to a
random step so the search cannot stall.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

SIGN_MODES = ("paper", "descent")


@dataclass(frozen=True)
class ControllerConfig:
    """Tuning knobs for the adaptive rule.

    ``ewma_beta`` smooths raw peaks (``None`` compares raw values);
    ``allow_zero_step`` widens the random step to {-1, 0, +1}.
    """

    sign_mode: str = "paper"
    ewma_beta: float | None = None
    allow_zero_step: bool = False
    n_c_min: int = 1
    n_c_max: int = 64

    def __post_init__(self):
        if self.sign_mode not in SIGN_MODES:
            raise ValidationError(
                f"sign_mode must be one of {SIGN_MODES}, got {self.sign_mode!r}")
        if self.ewma_beta is not None and not 0.0 < self.ewma_beta <= 1.0:
            raise ValidationError(
                f"ewma_beta must lie in (0, 1], got {self.ewma_beta}")
        if self.n_c_min < 1 or self.n_c_max < self.n_c_min:
            raise ValidationError(
                f"need 1 <= n_c_min <= n_c_max, got "
                f"[{self.n_c_min}, {self.n_c_max}]")


@dataclass(frozen=True)
class ControllerState:
    """Current codeword length, last step taken, last compared measurement."""

    n_c: int
    delta: int
    metric: float | None = None


def _draw_delta(u, allow_zero):
    # u is uniform on [0, 1); the zero-step variant picks from {-1, 0, +1}.
    if allow_zero:
        return int(u * 3.0) - 1
    return -1 if u < 0.5 else 1


def init_state(n_c0, config, rng):
    """Start at ``n_c0`` with a randomly drawn first step direction."""
    n_c0 = int(n_c0)
    if not config.n_c_min <= n_c0 <= config.n_c_max:
        raise ValidationError(
            f"n_c0={n_c0} outside [{config.n_c_min}, {config.n_c_max}]")
    return ControllerState(n_c0, _draw_delta(rng.random(), config.allow_zero_step))


def update(state, peak, config, rng):
    """Advance the controller by one measured peak.

    Draws from ``rng`` only when the random branch is taken, so replaying
    the same generator reproduces the same trajectory regardless of how
    many deterministic branches occur in between.
    """
    if config.ewma_beta is None or state.metric is None:
        metric = float(peak)
    else:
        metric = config.ewma_beta * float(peak) \
            + (1.0 - config.ewma_beta) * state.metric

    if state.metric is None or metric == state.metric or state.delta == 0:
        delta = _draw_delta(rng.random(), config.allow_zero_step)
    elif metric > state.metric:
        delta = state.delta if config.sign_mode == "paper" else -state.delta
    else:
        delta = -state.delta if config.sign_mode == "paper" else state.delta

    n_c = min(max(state.n_c + delta, config.n_c_min), config.n_c_max)
    return ControllerState(n_c, delta, metric)


def run_on_objective(objective, n_c0, config, rng, n_updates):
    """Drive the rule against a deterministic objective ``n_c -> value``.

    Returns the visited ``n_c`` path (length ``n_updates + 1``) and the
    final state. Useful for studying convergence without queueing noise.
    """
    if n_updates < 0:
        raise ValidationError(f"n_updates must be >= 0, got {n_updates}")
    state = init_state(n_c0, config, rng)
    path = np.empty(n_updates + 1, dtype=np.int64)
    path[0] = state.n_c
    for k in range(n_updates):
        state = update(state, objective(state.n_c), config, rng)
        path[k + 1] = state.n_c
    return path, state
