"""Closed-form age metrics for the M/D/1 status-updating model.

Updates arrive as a Poisson process with rate ``lam`` and each occupies the
channel for exactly ``n_c`` channel uses (one channel use is the time unit),
so service is deterministic with rate ``mu = 1/n_c`` and load
``rho = lam * n_c``. Results hold for a stable FCFS queue (``rho < 1``).

Two peak-age quantities are exposed. The plain peak age counts every
delivered update. The task-level peak age counts only updates that the
receiver classifies correctly, which inflates peaks by the wait for the
next successful delivery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .accuracy import lookup_pc
from .errors import InstabilityError, ValidationError


def check_stability(lam, n_c):
    """Validate rate and service-length, returning the load ``rho``."""
    if lam <= 0.0:
        raise ValidationError(f"arrival rate must be positive, got {lam}")
    if n_c < 1:
        raise ValidationError(f"n_c must be >= 1, got {n_c}")
    rho = lam * n_c
    if rho >= 1.0:
        raise InstabilityError(lam, n_c)
    return rho


def mean_waiting_time(lam, n_c):
    """Mean FCFS waiting time: rho / (2 * mu * (1 - rho)) with mu = 1/n_c."""
    rho = check_stability(lam, n_c)
    mu = 1.0 / n_c
    return rho / (2.0 * mu * (1.0 - rho))


def md1_components(lam, n_c):
    """(mean interarrival, mean wait, mean service) for the stable queue."""
    wait = mean_waiting_time(lam, n_c)
    return (1.0 / lam, wait, float(n_c))


def paoi_mean(lam, n_c):
    """Mean peak age over all deliveries: E[Y] + E[W] + E[S]."""
    interarrival, wait, service = md1_components(lam, n_c)
    return interarrival + wait + service

def extra_interarrival_mean(lam, p_c):
    """Mean extra wait for a successful update: (1 - p_c) / (lam * p_c).

    Deliveries succeed independently with probability ``p_c``, so the number
    of failures before a success is geometric and each failure costs one
    more interarrival. Returns ``inf`` when ``p_c`` is zero.
    """
    if lam <= 0.0:
        raise ValidationError(f"arrival rate must be positive, got {lam}")
    if not 0.0 <= p_c <= 1.0:
        raise ValidationError(f"p_c must lie in [0, 1], got {p_c}")
    if p_c == 0.0:
        return math.inf
    return (1.0 - p_c) / (lam * p_c)


def paoti_mean(lam, n_c, p_c):
    """Mean task-level peak age as the four-term sum.

    Interarrival + extra interarrivals until a success + wait + service.
    """
    interarrival, wait, service = md1_components(lam, n_c)
    return interarrival + extra_interarrival_mean(lam, p_c) + wait + service


def paoti_mean_compact(lam, n_c, p_c):
    """Mean task-level peak age in collapsed form.

    Algebraically equal to :func:`paoti_mean`; kept separate so the two
    derivations can be cross-checked numerically.
    """
    rho = check_stability(lam, n_c)
    if not 0.0 <= p_c <= 1.0:
        raise ValidationError(f"p_c must lie in [0, 1], got {p_c}")
    if p_c == 0.0:
        return math.inf
    return 1.0 / (lam * p_c) + (2.0 - rho) * n_c / (2.0 * (1.0 - rho))


@dataclass(frozen=True)
class OptimalNc:
    """Grid minimizer of the mean task-level peak age."""

    n_c: int
    value: float
    grid: tuple[int, ...]
    values: tuple[float, ...]


def optimal_nc(lam, curve, n_c_min=1, n_c_max=64):
    """Minimize mean task-level peak age over an integer n_c grid.

    Longer codewords raise accuracy but also service time and queueing
    delay, so the objective is unimodal-in-practice with an interior
    minimum. Grid points at or beyond the stability limit are skipped.
    """
    if n_c_min < 1 or n_c_max < n_c_min:
        raise ValidationError(
            f"need 1 <= n_c_min <= n_c_max, got [{n_c_min}, {n_c_max}]")
    grid, values = [], []
    for n in range(int(n_c_min), int(n_c_max) + 1):
        if lam * n >= 1.0:
            break
        p_c = lookup_pc(curve, n)
        value = paoti_mean(lam, n, p_c) if p_c > 0.0 else math.inf
        grid.append(n)
        values.append(value)
    if not grid:
        raise InstabilityError(lam, int(n_c_min))
    if all(math.isinf(v) for v in values):
        raise ValidationError("accuracy is zero on the whole stable grid")
    best = int(np.argmin(values))
    return OptimalNc(grid[best], values[best], tuple(grid), tuple(values))
