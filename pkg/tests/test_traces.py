"""Trace exports: column layouts, exact round-trips, invariant checking."""

import csv
import dataclasses
import math

import numpy as np
import pytest

from taskage.controller import ControllerConfig
from taskage.des import SimConfig, run_sim
from taskage.errors import TraceOrderError, ValidationError
from taskage.fixtures import preset_curve
from taskage.traces import (CONTROLLER_COLUMNS, PEAK_COLUMNS, TRACE_COLUMNS,
                            verify_trace, write_controller_csv,
                            write_peaks_csv, write_trace_csv)


@pytest.fixture(scope="module")
def fixed_result():
    return run_sim(SimConfig(lam=0.1, n_events=400, n_c=5, p_c=0.8, seed=9))


@pytest.fixture(scope="module")
def adaptive_result():
    return run_sim(SimConfig(
        lam=0.1, n_events=400, n_c=5, curve=preset_curve("MNIST", "CNN", 5.0),
        mode="adaptive", seed=9,
        controller=ControllerConfig(sign_mode="descent", n_c_max=16)))


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestTraceCsv:
    def test_header_and_length(self, fixed_result, tmp_path):
        path = tmp_path / "trace.csv"
        write_trace_csv(fixed_result, path)
        rows = read_rows(path)
        assert tuple(rows[0]) == TRACE_COLUMNS
        assert len(rows) == 1 + 400
        assert rows[1][0] == "1"

    def test_values_round_trip_exactly(self, fixed_result, tmp_path):
        path = tmp_path / "trace.csv"
        write_trace_csv(fixed_result, path)
        rows = read_rows(path)[1:]
        k = 57
        r = rows[k]
        assert float(r[1]) == fixed_result.t_arrival[k]
        assert float(r[2]) == fixed_result.t_start[k]
        assert float(r[3]) == fixed_result.t_depart[k]
        assert float(r[5]) == fixed_result.wait[k]
        assert int(r[9]) == fixed_result.success[k]
        assert int(r[10]) == 5

    def test_interarrival_and_interdeparture_columns(self, fixed_result,
                                                     tmp_path):
        path = tmp_path / "trace.csv"
        write_trace_csv(fixed_result, path)
        rows = read_rows(path)[1:]
        # first gaps are measured from the origin
        assert float(rows[0][4]) == fixed_result.t_arrival[0]
        assert float(rows[0][8]) == fixed_result.t_depart[0]
        a = np.array([float(r[1]) for r in rows])
        y = np.array([float(r[4]) for r in rows])
        np.testing.assert_array_equal(y, np.diff(a, prepend=0.0))
        d = np.array([float(r[3]) for r in rows])
        dd = np.array([float(r[8]) for r in rows])
        np.testing.assert_array_equal(dd, np.diff(d, prepend=0.0))

    def test_service_and_system_time_columns(self, fixed_result, tmp_path):
        path = tmp_path / "trace.csv"
        write_trace_csv(fixed_result, path)
        rows = read_rows(path)[1:]
        for r in rows[:50]:
            a, s, d = float(r[1]), float(r[2]), float(r[3])
            assert float(r[6]) == d - s
            assert float(r[7]) == d - a

    def test_rewrite_is_byte_identical(self, fixed_result, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_trace_csv(fixed_result, p1)
        write_trace_csv(fixed_result, p2)
        assert p1.read_bytes() == p2.read_bytes()


class TestPeaksCsv:
    def test_one_plain_peak_per_departure_plus_task_peaks(self, fixed_result,
                                                          tmp_path):
        path = tmp_path / "peaks.csv"
        write_peaks_csv(fixed_result, path)
        rows = read_rows(path)[1:]
        n_success = int(fixed_result.success.sum())
        assert len(rows) == 400 + n_success
        kinds = [r[0] for r in rows]
        assert kinds.count("paoi") == 400
        assert kinds.count("paoti") == n_success

    def test_header(self, fixed_result, tmp_path):
        path = tmp_path / "peaks.csv"
        write_peaks_csv(fixed_result, path)
        assert tuple(read_rows(path)[0]) == PEAK_COLUMNS

    def test_task_peaks_follow_their_departure(self, fixed_result, tmp_path):
        path = tmp_path / "peaks.csv"
        write_peaks_csv(fixed_result, path)
        rows = read_rows(path)[1:]
        for i, r in enumerate(rows):
            if r[0] == "paoti":
                assert rows[i - 1][0] == "paoi"
                assert rows[i - 1][1] == r[1]

    def test_values_match_result_arrays(self, fixed_result, tmp_path):
        path = tmp_path / "peaks.csv"
        write_peaks_csv(fixed_result, path)
        rows = read_rows(path)[1:]
        got = np.array([float(r[2]) for r in rows if r[0] == "paoti"])
        np.testing.assert_array_equal(got, fixed_result.paoti_peaks)


class TestControllerCsv:
    def test_header_and_rows(self, adaptive_result, tmp_path):
        path = tmp_path / "ctrl.csv"
        write_controller_csv(adaptive_result, path)
        rows = read_rows(path)
        assert tuple(rows[0]) == CONTROLLER_COLUMNS
        assert len(rows) == 1 + len(adaptive_result.ctrl)
        first = rows[1]
        assert float(first[0]) == adaptive_result.ctrl.t[0]
        assert int(first[1]) == adaptive_result.ctrl.n_c[0]

    def test_fixed_mode_is_rejected(self, fixed_result, tmp_path):
        with pytest.raises(ValidationError):
            write_controller_csv(fixed_result, tmp_path / "ctrl.csv")


def corrupt(result, field, index, value):
    arr = getattr(result, field).copy()
    arr[index] = value
    return dataclasses.replace(result, **{field: arr})


class TestVerifyTrace:
    def test_clean_runs_pass(self, fixed_result, adaptive_result):
        assert verify_trace(fixed_result) == 400
        assert verify_trace(adaptive_result) == 400

    def test_detects_start_before_arrival(self, fixed_result):
        bad = corrupt(fixed_result, "t_start", 20,
                      fixed_result.t_arrival[20] - 1.0)
        with pytest.raises(TraceOrderError, match="update 21"):
            verify_trace(bad)

    def test_detects_departure_before_start(self, fixed_result):
        bad = corrupt(fixed_result, "t_depart", 33,
                      fixed_result.t_start[33] - 0.5)
        with pytest.raises(TraceOrderError, match="update 34"):
            verify_trace(bad)

    def test_detects_nonincreasing_arrivals(self, fixed_result):
        bad = corrupt(fixed_result, "t_arrival", 11,
                      fixed_result.t_arrival[10])
        with pytest.raises(TraceOrderError, match="not strictly increasing"):
            verify_trace(bad)

    def test_detects_broken_waiting_recursion(self, fixed_result):
        bad = corrupt(fixed_result, "wait", 50,
                      fixed_result.wait[50] + 0.001)
        with pytest.raises(TraceOrderError, match="FCFS recursion"):
            verify_trace(bad)

    def test_tolerance_is_respected(self, fixed_result):
        nudged = corrupt(fixed_result, "wait", 50,
                         fixed_result.wait[50] + 1e-12)
        assert verify_trace(nudged) == 400
