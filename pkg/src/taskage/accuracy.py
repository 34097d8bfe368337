"""Classification-accuracy curves p_c(n_c) and their parametric stand-ins.

A curve maps the number of channel uses to the probability of correct
classification for one (dataset, model, SNR) triple. Curves are immutable
after construction and safe to share across concurrent simulation runs.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import least_squares

from .errors import ConfigError, TableParseError, ValidationError

# Column order of the accuracy-table CSV, the sole contract between the
# trainer and this package.
TABLE_COLUMNS = ("dataset", "model", "snr_db", "n_c", "p_c", "n_test", "seed")


class Dataset(str, enum.Enum):
    MNIST = "MNIST"
    CIFAR10 = "CIFAR10"


class ModelKind(str, enum.Enum):
    FNN = "FNN"
    CNN = "CNN"


class CurveSource(str, enum.Enum):
    TRAINED = "trained"
    SYNTHETIC = "synthetic"
    FITTED = "fitted"


@dataclass(frozen=True)
class AccuracyCurve:
    """Tabulated accuracy versus channel uses for one (dataset, model, SNR).

    ``points`` is an ordered tuple of ``(n_c, p_c)`` pairs with strictly
    increasing integer ``n_c`` and ``p_c`` in [0, 1]. At least two points
    are required. Raw trained curves may contain small non-monotonicities;
    :meth:`isotonic` exposes a regularized nondecreasing view.
    """

    dataset: Dataset
    model: ModelKind
    snr_db: float
    points: tuple[tuple[int, float], ...]
    source: CurveSource = CurveSource.SYNTHETIC

    def __post_init__(self):
        pts = tuple((int(n), float(p)) for n, p in self.points)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "dataset", Dataset(self.dataset))
        object.__setattr__(self, "model", ModelKind(self.model))
        object.__setattr__(self, "source", CurveSource(self.source))
        if len(pts) < 2:
            raise ValidationError("an accuracy curve needs at least 2 points")
        for n, p in pts:
            if n < 1:
                raise ValidationError(f"n_c must be a positive integer, got {n}")
            if not 0.0 <= p <= 1.0:
                raise ValidationError(f"p_c must lie in [0, 1], got {p}")
        ncs = [n for n, _ in pts]
        if any(b <= a for a, b in zip(ncs, ncs[1:])):
            raise ValidationError("n_c values must be strictly increasing")

    @property
    def key(self):
        return (self.dataset.value, self.model.value, self.snr_db)

    @property
    def nc_values(self):
        return np.array([n for n, _ in self.points], dtype=np.int64)

    @property
    def pc_values(self):
        return np.array([p for _, p in self.points], dtype=np.float64)

    def is_monotone(self):
        p = self.pc_values
        return bool(np.all(np.diff(p) >= 0.0))

    def isotonic(self):
        """Nondecreasing view obtained by pool-adjacent-violators."""
        smoothed = _pav_nondecreasing(self.pc_values)
        pts = tuple((int(n), float(p)) for n, p in zip(self.nc_values, smoothed))
        return replace(self, points=pts)

    @classmethod
    def constant(cls, p_c, dataset=Dataset.MNIST, model=ModelKind.CNN,
                 snr_db=5.0, n_c_max=64):
        """Flat curve, handy for fixed-accuracy simulations and tests."""
        return cls(dataset, model, snr_db, ((1, p_c), (int(n_c_max), p_c)),
                   source=CurveSource.SYNTHETIC)


def _pav_nondecreasing(y):
    """Isotonic (nondecreasing) regression by pool-adjacent-violators."""
    level = [float(v) for v in y]
    weight = [1.0] * len(level)
    i = 0
    while i < len(level) - 1:
        if level[i] > level[i + 1]:
            merged = (level[i] * weight[i] + level[i + 1] * weight[i + 1])
            weight[i] += weight.pop(i + 1)
            level[i] = merged / weight[i]
            level.pop(i + 1)
            if i > 0:
                i -= 1
        else:
            i += 1
    out = []
    for v, w in zip(level, weight):
        out.extend([v] * int(w))
    return np.array(out, dtype=np.float64)


def lookup_pc(curve, n_c):
    """Accuracy at ``n_c``: exact at knots, linear between, clamped outside.

    The model only ever evaluates integer n_c; interpolation exists for
    fitted curves and plotting convenience.
    """
    if n_c < 1:
        raise ValidationError(f"n_c must be >= 1, got {n_c}")
    return float(np.interp(n_c, curve.nc_values, curve.pc_values))


@dataclass(frozen=True)
class ParametricCurve:
    """Saturating-exponential accuracy model.

    Evaluates ``p(n) = p_max * (1 - exp(-alpha * (n - n0)))`` clamped to
    [0, 1]; nondecreasing for ``n >= n0``. Accuracy gains slow down as the
    number of channel uses grows, which this family reproduces.
    """

    p_max: float
    alpha: float
    n0: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.p_max <= 1.0:
            raise ValidationError(f"p_max must lie in (0, 1], got {self.p_max}")
        if self.alpha <= 0.0:
            raise ValidationError(f"alpha must be positive, got {self.alpha}")

    def evaluate(self, n_c):
        raw = self.p_max * (1.0 - math.exp(-self.alpha * (n_c - self.n0)))
        return min(max(raw, 0.0), 1.0)


@dataclass(frozen=True)
class FitResult:
    params: ParametricCurve
    rms_residual: float
    degenerate: bool = False


ALPHA_BOUNDS = (1e-3, 50.0)


def fit_parametric(curve):
    """Deterministic least-squares fit of a :class:`ParametricCurve`.

    All-equal accuracies produce a flat fit with ``alpha`` pinned to the
    saturation limit and the ``degenerate`` flag set.
    """
    if len(curve.points) < 3:
        raise ValidationError("fit needs at least 3 points")
    n = curve.nc_values.astype(np.float64)
    p = curve.pc_values

    if np.ptp(p) == 0.0:
        flat = ParametricCurve(p_max=max(float(p[0]), 1e-12),
                               alpha=ALPHA_BOUNDS[1], n0=float(n[0]) - 1.0)
        resid = np.array([flat.evaluate(v) for v in n]) - p
        return FitResult(flat, float(np.sqrt(np.mean(resid ** 2))),
                         degenerate=True)

    def residuals(theta):
        p_max, alpha, n0 = theta
        return p_max * (1.0 - np.exp(-alpha * (n - n0))) - p

    x0 = np.array([min(max(float(p.max()), 0.05), 1.0), 1.0, 0.0])
    lower = np.array([1e-6, ALPHA_BOUNDS[0], float(n[0]) - 50.0])
    upper = np.array([1.0, ALPHA_BOUNDS[1], float(n[0])])
    sol = least_squares(residuals, x0, bounds=(lower, upper),
                        xtol=1e-15, ftol=1e-15, gtol=1e-15)
    params = ParametricCurve(*(float(v) for v in sol.x))
    rms = float(np.sqrt(np.mean(sol.fun ** 2)))
    return FitResult(params, rms)


def synth_curve(params, n_c_grid, dataset=Dataset.MNIST, model=ModelKind.CNN,
                snr_db=5.0):
    """Evaluate a parametric curve on an integer grid (sorted internally)."""
    if len(n_c_grid) == 0:
        raise ConfigError("n_c grid must not be empty")
    grid = sorted(int(n) for n in n_c_grid)
    pts = tuple((n, params.evaluate(n)) for n in grid)
    return AccuracyCurve(dataset, model, snr_db, pts, source=CurveSource.SYNTHETIC)


def _parse_row(row, line):
    if len(row) != len(TABLE_COLUMNS):
        raise TableParseError(
            f"expected {len(TABLE_COLUMNS)} columns, got {len(row)}", line)
    ds, model, snr, n_c, p_c, n_test, seed = (v.strip() for v in row)
    try:
        ds = Dataset(ds)
        model = ModelKind(model)
    except ValueError as exc:
        raise TableParseError(str(exc), line) from None
    try:
        snr = float(snr)
        n_c = int(n_c)
        p_c = float(p_c)
        n_test = int(n_test) if n_test else None
        seed = int(seed) if seed else None
    except ValueError as exc:
        raise TableParseError(f"bad numeric field: {exc}", line) from None
    if n_c < 1:
        raise TableParseError(f"n_c must be a positive integer, got {n_c}", line)
    if not 0.0 <= p_c <= 1.0:
        raise ValidationError(f"line {line}: p_c outside [0, 1]: {p_c}")
    return (ds, model, snr), n_c, p_c


def load_tables(path):
    """Read an accuracy-table CSV into one curve per (dataset, model, SNR).

    Raises :class:`TableParseError` (with the offending line number) for
    malformed rows and :class:`ValidationError` for out-of-range or
    duplicate points.
    """
    groups = {}
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read accuracy table {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != TABLE_COLUMNS:
            raise TableParseError(
                f"header must be {','.join(TABLE_COLUMNS)}", line=1)
        for line, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            key, n_c, p_c = _parse_row(row, line)
            points = groups.setdefault(key, {})
            if n_c in points:
                raise ValidationError(
                    f"line {line}: duplicate n_c={n_c} for "
                    f"{key[0].value}/{key[1].value}/{key[2]:g} dB")
            points[n_c] = p_c
    curves = []
    for key in sorted(groups, key=lambda k: (k[0].value, k[1].value, k[2])):
        ds, model, snr = key
        pts = tuple(sorted(groups[key].items()))
        curves.append(AccuracyCurve(ds, model, snr, pts, source=CurveSource.TRAINED))
    return curves


def save_tables(curves, path):
    """Write curves in the accuracy-table CSV format (sorted, reproducible)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TABLE_COLUMNS)
        for curve in sorted(curves, key=lambda c: c.key):
            for n_c, p_c in curve.points:
                writer.writerow([curve.dataset.value, curve.model.value,
                                 repr(float(curve.snr_db)), n_c, repr(p_c), "", ""])
