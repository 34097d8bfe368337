"""Per-event trace, peak, and controller-trajectory exports.

These CSV layouts are stable interfaces for downstream analysis tools.
Floats are written with ``repr`` so files round-trip exactly and repeated
runs are byte-identical.
"""

from __future__ import annotations

import csv

import numpy as np

from .errors import TraceOrderError, ValidationError

TRACE_COLUMNS = ("k", "t_arrival", "t_start", "t_depart", "Y", "W", "S",
                 "T", "D", "success", "n_c_used")
PEAK_COLUMNS = ("kind", "t_peak", "value")
CONTROLLER_COLUMNS = ("t", "n_c", "delta", "measured_peak")


def _fmt(x):
    return repr(float(x))


def write_trace_csv(result, path):
    """Per-update rows: times, interarrival, wait, service, system time,
    interdeparture, delivery outcome, codeword length used.

    ``k`` is 1-based; the first interarrival and interdeparture are
    measured from the time origin.
    """
    arr, start, dep = result.t_arrival, result.t_start, result.t_depart
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        prev_arr = 0.0
        prev_dep = 0.0
        for k in range(arr.shape[0]):
            a, s, d = float(arr[k]), float(start[k]), float(dep[k])
            w.writerow([k + 1, _fmt(a), _fmt(s), _fmt(d),
                        _fmt(a - prev_arr), _fmt(result.wait[k]),
                        _fmt(d - s), _fmt(d - a), _fmt(d - prev_dep),
                        int(result.success[k]), int(result.n_used[k])])
            prev_arr, prev_dep = a, d


def write_peaks_csv(result, path):
    """Peak series in departure order: every delivery contributes a plain
    peak; successful ones also contribute a task-level peak."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PEAK_COLUMNS)
        for k in range(result.t_depart.shape[0]):
            t = _fmt(result.t_depart[k])
            w.writerow(["paoi", t, _fmt(result.paoi[k])])
            if result.success[k]:
                w.writerow(["paoti", t, _fmt(result.paoti_full[k])])


def write_controller_csv(result, path):
    """Controller trajectory: one row per accepted measurement."""
    if result.ctrl is None:
        raise ValidationError("run has no controller trajectory "
                              "(fixed-length mode)")
    ctrl = result.ctrl
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CONTROLLER_COLUMNS)
        for i in range(len(ctrl)):
            w.writerow([_fmt(ctrl.t[i]), int(ctrl.n_c[i]),
                        int(ctrl.delta[i]), _fmt(ctrl.measured_peak[i])])


def verify_trace(result, atol=1e-9):
    """Check the structural invariants of a run's event trace.

    Arrival/start/departure ordering per update, strictly increasing
    arrivals and departures, and the FCFS waiting-time recursion
    ``W_k = max(0, W_{k-1} + S_{k-1} - Y_k)`` within ``atol``. Raises
    :class:`TraceOrderError` naming the first offending update; returns
    the number of updates checked.
    """
    arr, start, dep = result.t_arrival, result.t_start, result.t_depart
    n = arr.shape[0]
    if np.any(start < arr):
        k = int(np.argmax(start < arr))
        raise TraceOrderError(f"update {k + 1}: service starts before arrival")
    if np.any(dep < start):
        k = int(np.argmax(dep < start))
        raise TraceOrderError(f"update {k + 1}: departs before service start")
    for name, t in (("arrival", arr), ("departure", dep)):
        d = np.diff(t)
        if np.any(d <= 0):
            k = int(np.argmax(d <= 0))
            raise TraceOrderError(f"update {k + 2}: {name} times not "
                                  f"strictly increasing")
    service = dep - start
    y = np.diff(arr, prepend=0.0)
    lindley = np.maximum(0.0, result.wait[:-1] + service[:-1] - y[1:])
    bad = np.abs(result.wait[1:] - lindley) > atol
    if np.any(bad):
        k = int(np.argmax(bad))
        raise TraceOrderError(
            f"update {k + 2}: waiting time breaks the FCFS recursion "
            f"({result.wait[k + 1]!r} vs {lindley[k]!r})")
    return n
