"""Event-calendar re-implementation of the queue, for cross-checking.

The kernels advance update-by-update with a recursion; this module instead
runs a classic calendar: a heap of timestamped arrival and departure
events, an explicit FIFO of waiting updates, and a busy flag. The two
formulations must agree bit-for-bit on every output when fed the same
pre-drawn random arrays, which is what the kernel tests assert.

Departures sort before arrivals at equal timestamps, matching the rule
that a departure at exactly the arrival instant is already visible.
"""

from __future__ import annotations

import heapq
from collections import deque

import numpy as np

from .controller import ControllerState, update as controller_update

_DEPART, _ARRIVE = 0, 1


class _ArrayDraws:
    """Feeds pre-drawn uniforms through the ``rng.random()`` interface."""

    def __init__(self, values):
        self._values = values.tolist()
        self.count = 0

    def random(self):
        u = self._values[self.count]
        self.count += 1
        return u


def _arrival_times(y):
    ys = y.tolist()
    arr = np.empty(len(ys), dtype=np.float64)
    t = 0.0
    for k, gap in enumerate(ys):
        t = t + gap
        arr[k] = t
    return arr


def calendar_fixed(y, u_success, service, p_c):
    """Calendar twin of :func:`taskage.kernels.simulate_fixed`."""
    n = y.shape[0]
    arr = _arrival_times(y)
    us = u_success.tolist()
    service = float(service)
    p_c = float(p_c)

    t_start = np.empty(n, dtype=np.float64)
    t_depart = np.empty(n, dtype=np.float64)
    wait = np.empty(n, dtype=np.float64)
    success = np.empty(n, dtype=np.uint8)
    paoi = np.empty(n, dtype=np.float64)
    paoti = np.empty(n, dtype=np.float64)

    heap = [(float(arr[k]), _ARRIVE, k) for k in range(n)]
    heapq.heapify(heap)
    waiting = deque()
    busy = False
    last_success_gen = 0.0

    def begin_service(k, now):
        nonlocal busy
        dep = now + service
        t_start[k] = now
        t_depart[k] = dep
        wait[k] = now - float(arr[k])
        heapq.heappush(heap, (dep, _DEPART, k))
        busy = True

    while heap:
        now, kind, k = heapq.heappop(heap)
        if kind == _ARRIVE:
            if busy:
                waiting.append(k)
            else:
                begin_service(k, now)
        else:
            busy = False
            paoi[k] = now - (float(arr[k - 1]) if k > 0 else 0.0)
            if us[k] < p_c:
                success[k] = 1
                paoti[k] = now - last_success_gen
                last_success_gen = float(arr[k])
            else:
                success[k] = 0
                paoti[k] = np.nan
            if waiting:
                begin_service(waiting.popleft(), now)
    return arr, t_start, t_depart, wait, success, paoi, paoti


def calendar_adaptive(y, u_success, u_delta, delta0, n_c0, pc_table,
                      controller_config, binding):
    """Calendar twin of :func:`taskage.kernels.simulate_adaptive`.

    Takes the controller configuration object and the binding name
    (``"service_start"`` or ``"arrival"``); the codeword-length logic is
    delegated to :func:`taskage.controller.update` rather than inlined.
    """
    if binding not in ("service_start", "arrival"):
        raise ValueError(f"unknown binding {binding!r}")
    n = y.shape[0]
    arr = _arrival_times(y)
    us = u_success.tolist()
    pcs = pc_table.tolist()
    draws = _ArrayDraws(u_delta)

    t_start = np.empty(n, dtype=np.float64)
    t_depart = np.empty(n, dtype=np.float64)
    wait = np.empty(n, dtype=np.float64)
    success = np.empty(n, dtype=np.uint8)
    paoi = np.empty(n, dtype=np.float64)
    paoti = np.empty(n, dtype=np.float64)
    n_used = np.empty(n, dtype=np.int64)

    state = ControllerState(int(n_c0), int(delta0), None)
    ctrl_t, ctrl_nc, ctrl_delta, ctrl_peak = [], [], [], []
    # Successful departures not yet folded into the controller
    # (arrival binding only), in departure order.
    pending = deque()

    heap = [(float(arr[k]), _ARRIVE, k) for k in range(n)]
    heapq.heapify(heap)
    waiting = deque()
    busy = False
    last_success_gen = 0.0

    def fold(peak, when):
        nonlocal state
        state = controller_update(state, peak, controller_config, draws)
        ctrl_t.append(when)
        ctrl_nc.append(state.n_c)
        ctrl_delta.append(state.delta)
        ctrl_peak.append(peak)

    def begin_service(k, now):
        nonlocal busy
        nc = n_used[k] if binding == "arrival" else state.n_c
        n_used[k] = nc
        dep = now + float(nc)
        t_start[k] = now
        t_depart[k] = dep
        wait[k] = now - float(arr[k])
        heapq.heappush(heap, (dep, _DEPART, k))
        busy = True

    while heap:
        now, kind, k = heapq.heappop(heap)
        if kind == _ARRIVE:
            if binding == "arrival":
                while pending and pending[0][0] <= now:
                    dep_time, peak = pending.popleft()
                    fold(peak, dep_time)
                n_used[k] = state.n_c
            if busy:
                waiting.append(k)
            else:
                begin_service(k, now)
        else:
            busy = False
            paoi[k] = now - (float(arr[k - 1]) if k > 0 else 0.0)
            if us[k] < pcs[int(n_used[k])]:
                success[k] = 1
                peak = now - last_success_gen
                paoti[k] = peak
                last_success_gen = float(arr[k])
                if binding == "arrival":
                    pending.append((now, peak))
                else:
                    fold(peak, now)
            else:
                success[k] = 0
                paoti[k] = np.nan
            if waiting:
                begin_service(waiting.popleft(), now)

    return (arr, t_start, t_depart, wait, success, paoi, paoti, n_used,
            np.array(ctrl_t, dtype=np.float64),
            np.array(ctrl_nc, dtype=np.int64),
            np.array(ctrl_delta, dtype=np.int64),
            np.array(ctrl_peak, dtype=np.float64),
            len(ctrl_t), draws.count)
