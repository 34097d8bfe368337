# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled event loop; a line-for-line translation of ``_engine_py``.

Keep the floating point operation order identical to the Python module so
that both backends produce bit-identical outputs.
"""

from libc.math cimport NAN

import numpy as np


def simulate_fixed(double[::1] y, double[::1] u_success, double service,
                   double p_c):
    """Serve ``len(y)`` updates at a constant codeword length."""
    cdef Py_ssize_t n = y.shape[0]
    t_arrival = np.empty(n, dtype=np.float64)
    t_start = np.empty(n, dtype=np.float64)
    t_depart = np.empty(n, dtype=np.float64)
    wait = np.empty(n, dtype=np.float64)
    success = np.empty(n, dtype=np.uint8)
    paoi = np.empty(n, dtype=np.float64)
    paoti = np.empty(n, dtype=np.float64)

    cdef double[::1] t_arrival_v = t_arrival
    cdef double[::1] t_start_v = t_start
    cdef double[::1] t_depart_v = t_depart
    cdef double[::1] wait_v = wait
    cdef unsigned char[::1] success_v = success
    cdef double[::1] paoi_v = paoi
    cdef double[::1] paoti_v = paoti

    cdef double t = 0.0
    cdef double dep_prev = 0.0
    cdef double gen_prev = 0.0
    cdef double last_success_gen = 0.0
    cdef double start, dep
    cdef Py_ssize_t k

    for k in range(n):
        t = t + y[k]
        start = t if t > dep_prev else dep_prev
        dep = start + service
        t_arrival_v[k] = t
        t_start_v[k] = start
        t_depart_v[k] = dep
        wait_v[k] = start - t
        paoi_v[k] = dep - gen_prev
        if u_success[k] < p_c:
            success_v[k] = 1
            paoti_v[k] = dep - last_success_gen
            last_success_gen = t
        else:
            success_v[k] = 0
            paoti_v[k] = NAN
        gen_prev = t
        dep_prev = dep
    return t_arrival, t_start, t_depart, wait, success, paoi, paoti


def simulate_adaptive(double[::1] y, double[::1] u_success,
                      double[::1] u_delta, long delta0, long n_c0,
                      double[::1] pc_table, int sign_mode, double ewma_beta,
                      int allow_zero, long n_c_min, long n_c_max,
                      int binding):
    """Serve updates while adapting the codeword length from peaks."""
    cdef Py_ssize_t n = y.shape[0]
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

    cdef double[::1] t_arrival_v = t_arrival
    cdef double[::1] t_start_v = t_start
    cdef double[::1] t_depart_v = t_depart
    cdef double[::1] wait_v = wait
    cdef unsigned char[::1] success_v = success
    cdef double[::1] paoi_v = paoi
    cdef double[::1] paoti_v = paoti
    cdef long[::1] n_used_v = n_used
    cdef double[::1] ctrl_t_v = ctrl_t
    cdef long[::1] ctrl_nc_v = ctrl_nc
    cdef long[::1] ctrl_delta_v = ctrl_delta
    cdef double[::1] ctrl_peak_v = ctrl_peak

    cdef long nc = n_c0
    cdef long delta_prev = delta0
    cdef long delta
    cdef double metric_prev = 0.0
    cdef double metric, peak, u
    cdef int have_metric = 0
    cdef Py_ssize_t n_ctrl = 0
    cdef Py_ssize_t n_draws = 0
    cdef Py_ssize_t fold_ptr = 0

    cdef double t = 0.0
    cdef double dep_prev = 0.0
    cdef double gen_prev = 0.0
    cdef double last_success_gen = 0.0
    cdef double start, dep, service, p_c
    cdef Py_ssize_t k, j
    cdef int ok

    for k in range(n):
        t = t + y[k]

        if binding == 1:
            # Fold departures the transmitter has seen by this arrival.
            while fold_ptr < k and t_depart_v[fold_ptr] <= t:
                j = fold_ptr
                fold_ptr += 1
                if success_v[j] == 0:
                    continue
                peak = paoti_v[j]
                if ewma_beta <= 0.0 or have_metric == 0:
                    metric = peak
                else:
                    metric = ewma_beta * peak + (1.0 - ewma_beta) * metric_prev
                if have_metric == 0 or metric == metric_prev or delta_prev == 0:
                    u = u_delta[n_draws]
                    n_draws += 1
                    if allow_zero:
                        delta = <long>(u * 3.0) - 1
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
                ctrl_t_v[n_ctrl] = t_depart_v[j]
                ctrl_nc_v[n_ctrl] = nc
                ctrl_delta_v[n_ctrl] = delta
                ctrl_peak_v[n_ctrl] = peak
                n_ctrl += 1

        n_used_v[k] = nc
        service = <double>nc
        p_c = pc_table[nc]

        start = t if t > dep_prev else dep_prev
        dep = start + service
        t_arrival_v[k] = t
        t_start_v[k] = start
        t_depart_v[k] = dep
        wait_v[k] = start - t
        paoi_v[k] = dep - gen_prev
        ok = 1 if u_success[k] < p_c else 0
        success_v[k] = ok
        if ok:
            paoti_v[k] = dep - last_success_gen
            last_success_gen = t
        else:
            paoti_v[k] = NAN
        gen_prev = t
        dep_prev = dep

        if binding == 0 and ok:
            peak = paoti_v[k]
            if ewma_beta <= 0.0 or have_metric == 0:
                metric = peak
            else:
                metric = ewma_beta * peak + (1.0 - ewma_beta) * metric_prev
            if have_metric == 0 or metric == metric_prev or delta_prev == 0:
                u = u_delta[n_draws]
                n_draws += 1
                if allow_zero:
                    delta = <long>(u * 3.0) - 1
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
            ctrl_t_v[n_ctrl] = dep
            ctrl_nc_v[n_ctrl] = nc
            ctrl_delta_v[n_ctrl] = delta
            ctrl_peak_v[n_ctrl] = peak
            n_ctrl += 1

    return (t_arrival, t_start, t_depart, wait, success, paoi, paoti,
            n_used, ctrl_t, ctrl_nc, ctrl_delta, ctrl_peak, n_ctrl, n_draws)
