"""Checks on the trainer's exported accuracy tables, when present.

The simulator side is self-contained on preset curves; these tests only
run when the trainer in frontend/ has exported its accuracy CSV (or when
``TASKAGE_TRAINED_TABLE`` points at one), and verify the handoff contract:
the file loads cleanly, accuracies are usable, and the resulting optimal
codeword lengths land where the closed form says they should.
"""

import math
import os
from pathlib import Path

import numpy as np
import pytest

from taskage.accuracy import Dataset, ModelKind, load_tables, lookup_pc
from taskage.analytics import optimal_nc

DEFAULT_TABLE = Path(__file__).resolve().parent.parent / "frontend" / "out" \
    / "accuracy.csv"
TABLE = Path(os.environ.get("TASKAGE_TRAINED_TABLE", DEFAULT_TABLE))

pytestmark = pytest.mark.skipif(
    not TABLE.exists(),
    reason=f"trained accuracy table not present at {TABLE}")


@pytest.fixture(scope="module")
def curves():
    loaded = load_tables(TABLE)
    return {c.key: c for c in loaded}


def isotonic_r2(curve):
    p = curve.pc_values
    iso = curve.isotonic().pc_values
    ss_res = float(np.sum((p - iso) ** 2))
    ss_tot = float(np.sum((p - p.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0
    return 1.0 - ss_res / ss_tot


def test_table_loads_with_zero_validation_errors(curves):
    assert curves, "table contains no curves"
    for key, curve in curves.items():
        assert len(curve.points) >= 2, key


def test_mnist_cnn_reaches_095_at_long_codewords(curves):
    curve = curves[(Dataset.MNIST, ModelKind.CNN, 5.0)]
    assert lookup_pc(curve, 16) >= 0.95


def test_curves_are_monotone_trend(curves):
    for key, curve in curves.items():
        r2 = isotonic_r2(curve)
        assert r2 >= 0.95, f"{key}: isotonic R^2 = {r2:.3f} < 0.95"


def test_cleaner_channel_never_hurts_much(curves):
    pairs = {(ds, m) for ds, m, _ in curves}
    for ds, m in pairs:
        lo = curves.get((ds, m, 0.0))
        hi = curves.get((ds, m, 5.0))
        if lo is None or hi is None:
            continue
        common = sorted(set(lo.nc_values) & set(hi.nc_values))
        assert common
        for n in common:
            assert lookup_pc(hi, n) >= lookup_pc(lo, n) - 0.02, \
                f"{ds.value}/{m.value} n_c={n}"


def test_optimal_lengths_land_in_the_expected_band(curves):
    for model in (ModelKind.FNN, ModelKind.CNN):
        stars = []
        for snr in (0.0, 3.0, 5.0):
            curve = curves.get((Dataset.MNIST, model, snr))
            if curve is None:
                pytest.skip(f"no MNIST/{model.value} curve at {snr:g} dB")
            smooth = curve if curve.is_monotone() else curve.isotonic()
            star = optimal_nc(0.09, smooth, 1,
                              int(smooth.nc_values[-1])).n_c
            stars.append(star)
            assert star in (4, 5, 6), \
                f"MNIST/{model.value} at {snr:g} dB: n_c* = {star}"
        assert stars == sorted(stars, reverse=True), \
            f"MNIST/{model.value}: {stars} not nonincreasing in SNR"
