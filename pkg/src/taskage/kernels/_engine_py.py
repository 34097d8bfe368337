"""Pure-Python event loop, the reference for the compiled backend.

The compiled extension is a line-for-line translation of this module; any
change here must be mirrored there to keep outputs bit-identical.

Conventions shared by both kernels:

* Time starts at 0 with an empty queue; arrival k occurs ``y[k]`` after
  arrival k-1 (FCFS, single server, deterministic service).
* Delivery k succeeds iff ``u_success[k] < p_c``.
* Every departure yields a plain peak: departure time minus the previous
  arrival time (the origin for k = 0).
* Successful departures additionally yield a task-level peak: departure
  time minus the arrival time of the previous successful update (origin
  initially), after which that origin advances to this update's arrival.
"""

import math

import numpy as np


def simulate_fixed(y, u_success, service, p_c):
    """Serve ``len(y)`` updates at a constant codeword length.

    Returns ``(t_arrival, t_start, t_depart, wait, success, paoi, paoti)``;
    ``paoti`` is NaN at unsuccessful departures.
    """
    n = y.shape[0]
    t_arrival = np.empty(n, dtype=np.float64)
    t_start = np.empty(n, dtype=np.float64)
    t_depart = np.empty(n, dtype=np.float64)
    wait = np.empty(n, dtype=np.float64)
    success = np.empty(n, dtype=np.uint8)
    paoi = np.empty(n, dtype=np.float64)
    paoti = np.empty(n, dtype=np.float64)

    ys = y.tolist()
    us = u_success.tolist()
    service = float(service)
    p_c = float(p_c)
    nan = math.nan

    t = 0.0
    dep_prev = 0.0
    gen_prev = 0.0
    last_success_gen = 0.0
    for k in range(n):
        t = t + ys[k]
        start = t if t > dep_prev else dep_prev
        dep = start + service
        t_arrival[k] = t
        t_start[k] = start
        t_depart[k] = dep
        wait[k] = start - t
        paoi[k] = dep - gen_prev
        if us[k] < p_c:
            success[k] = 1
            paoti[k] = dep - last_success_gen
            last_success_gen = t
        else:
            success[k] = 0
            paoti[k] = nan
        gen_prev = t
        dep_prev = dep
    return t_arrival, t_start, t_depart, wait, success, paoi, paoti


def simulate_adaptive(y, u_success, u_delta, delta0, n_c0, pc_table,
                      sign_mode, ewma_beta, allow_zero, n_c_min, n_c_max,
                      binding):
    """Serve updates while adapting the codeword length from peaks.

    The controller folds in one measurement per successful departure.
    ``binding`` 0 sizes update k with the controller value current when
    its service starts; 1 freezes the value at its arrival instant, so
    departures later than the arrival are not yet visible to it.
    ``ewma_beta <= 0`` compares raw peaks. ``u_delta`` is consumed only
    on random branches; the count of draws is returned.

    Returns ``(t_arrival, t_start, t_depart, wait, success, paoi, paoti,
    n_used, ctrl_t, ctrl_nc, ctrl_delta, ctrl_peak, n_ctrl, n_draws)``
    with the ``ctrl_*`` arrays meaningful up to ``n_ctrl``.
    """
    n = y.shape[0]
    t_arrival = np.empty(n, dtype=np.float64)
    t_start = np.empty(n, dtype=np.float64)
    t_depart = np.empty(n, dtype=np.float64)
    wait = np.empty(n, dtype=np.float64)
    success = np.empty(n, dtype=np.uint8)
    paoi = np.empty(n, dtype=np.float64)
    paoti = np.empty(n, dtype=np.float64)
    n_used = np.empty(n, dtype=np.int64)
    ctrl_t = np.empty(n, dtype=np.float64)
    ctrl_nc = np.empty(n, dtype=np.int64)
    ctrl_delta = np.empty(n, dtype=np.int64)
    ctrl_peak = np.empty(n, dtype=np.float64)

    ys = y.tolist()
    us = u_success.tolist()
    ud = u_delta.tolist()
    pcs = pc_table.tolist()
    ewma_beta = float(ewma_beta)
    nan = math.nan

    nc = int(n_c0)
    delta_prev = int(delta0)
    metric_prev = 0.0
    have_metric = 0
    n_ctrl = 0
    n_draws = 0
    fold_ptr = 0

    t = 0.0
    dep_prev = 0.0
    gen_prev = 0.0
    last_success_gen = 0.0

    for k in range(n):
        t = t + ys[k]

        if binding == 1:
            # Fold departures the transmitter has seen by this arrival.
            while fold_ptr < k and t_depart[fold_ptr] <= t:
                j = fold_ptr
                fold_ptr += 1
                if success[j] == 0:
                    continue
                peak = float(paoti[j])
                if ewma_beta <= 0.0 or have_metric == 0:
                    metric = peak
                else:
                    metric = ewma_beta * peak + (1.0 - ewma_beta) * metric_prev
                if have_metric == 0 or metric == metric_prev or delta_prev == 0:
                    u = ud[n_draws]
                    n_draws += 1
                    if allow_zero:
                        delta = int(u * 3.0) - 1
                    else:
                        delta = -1 if u < 0.5 else 1
                elif metric > metric_prev:
                    delta = delta_prev if sign_mode == 0 else -delta_prev
                else:
                    delta = -delta_prev if sign_mode == 0 else delta_prev
                nc = nc + delta
                if nc < n_c_min:
                    nc = n_c_min
                elif nc > n_c_max:
                    nc = n_c_max
                delta_prev = delta
                metric_prev = metric
                have_metric = 1
                ctrl_t[n_ctrl] = float(t_depart[j])
                ctrl_nc[n_ctrl] = nc
                ctrl_delta[n_ctrl] = delta
                ctrl_peak[n_ctrl] = peak
                n_ctrl += 1

        n_used[k] = nc
        service = float(nc)
        p_c = pcs[nc]

        start = t if t > dep_prev else dep_prev
        dep = start + service
        t_arrival[k] = t
        t_start[k] = start
        t_depart[k] = dep
        wait[k] = start - t
        paoi[k] = dep - gen_prev
        ok = 1 if us[k] < p_c else 0
        success[k] = ok
        if ok:
            paoti[k] = dep - last_success_gen
            last_success_gen = t
        else:
            paoti[k] = nan
        gen_prev = t
        dep_prev = dep

        if binding == 0 and ok:
            peak = float(paoti[k])
            if ewma_beta <= 0.0 or have_metric == 0:
                metric = peak
            else:
                metric = ewma_beta * peak + (1.0 - ewma_beta) * metric_prev
            if have_metric == 0 or metric == metric_prev or delta_prev == 0:
                u = ud[n_draws]
                n_draws += 1
                if allow_zero:
                    delta = int(u * 3.0) - 1
                else:
                    delta = -1 if u < 0.5 else 1
            elif metric > metric_prev:
                delta = delta_prev if sign_mode == 0 else -delta_prev
            else:
                delta = -delta_prev if sign_mode == 0 else delta_prev
            nc = nc + delta
            if nc < n_c_min:
                nc = n_c_min
            elif nc > n_c_max:
                nc = n_c_max
            delta_prev = delta
            metric_prev = metric
            have_metric = 1
            ctrl_t[n_ctrl] = dep
            ctrl_nc[n_ctrl] = nc
            ctrl_delta[n_ctrl] = delta
            ctrl_peak[n_ctrl] = peak
            n_ctrl += 1

    return (t_arrival, t_start, t_depart, wait, success, paoi, paoti,
            n_used, ctrl_t, ctrl_nc, ctrl_delta, ctrl_peak, n_ctrl, n_draws)
