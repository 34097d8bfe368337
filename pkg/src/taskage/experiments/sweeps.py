"""Sweep, comparison, validation, and fit commands behind the CLI.

Every command is a pure function of its configuration and base seed: cell
seeds are derived per coordinate, cells are independent (and optionally
run in a worker pool), and result rows come back in cell order regardless
of completion order, so repeated runs write byte-identical CSV files.
"""

from __future__ import annotations

import csv
import dataclasses
import math
import multiprocessing
from dataclasses import dataclass

import numpy as np

from ..accuracy import fit_parametric, load_tables, lookup_pc
from ..analytics import (mean_waiting_time, optimal_nc, paoi_mean,
                         paoti_mean, paoti_mean_compact)
from ..des import SimConfig, run_sim
from ..errors import ConfigError
from ..fixtures import preset_curves
from .seeds import derive_seed


@dataclass(frozen=True)
class ResultRow:
    """One sweep cell; metric fields are ``None`` when not computed."""

    dataset: str
    model: str
    snr_db: float
    lam: float
    n_c: int
    p_c: float
    status: str
    paoti_cf: float | None = None
    paoi_cf: float | None = None
    sim_paoti_mean: float | None = None
    sim_paoti_ci: float | None = None
    sim_paoi_mean: float | None = None
    sim_paoi_ci: float | None = None


SWEEP_COLUMNS = ("dataset", "model", "snr_db", "lam", "n_c", "p_c", "status",
                 "paoti_cf", "paoi_cf", "sim_paoti_mean", "sim_paoti_ci",
                 "sim_paoi_mean", "sim_paoi_ci")
COMPARE_CELL_COLUMNS = ("dataset", "model", "snr_db", "lam", "fixed_n_c",
                        "fixed_paoti", "dynamic_paoti", "reduction_pct",
                        "dynamic_mean_nc")
COMPARE_SUMMARY_COLUMNS = ("dataset", "model", "fixed_paoti_mean",
                           "dynamic_paoti_mean", "reduction_pct")
VALIDATE_COLUMNS = ("check", "lam", "n_c", "p_c", "metric", "sim", "ref",
                    "se", "z", "status")
FIT_COLUMNS = ("dataset", "model", "snr_db", "p_max", "alpha", "n0",
               "rms_residual", "degenerate", "n_c_star")


def resolve_curves(curves_config):
    """Accuracy curves keyed by (dataset, model, snr_db)."""
    if curves_config.source == "preset":
        curves = preset_curves()
    else:
        curves = load_tables(curves_config.table)
    return {c.key: c for c in curves}


def curve_for(curves, dataset, model, snr_db):
    key = (dataset.value, model.value, float(snr_db))
    try:
        return curves[key]
    except KeyError:
        raise ConfigError(
            f"no accuracy curve for {key[0]}/{key[1]} at {snr_db:g} dB"
        ) from None


def _map_jobs(func, args_list, jobs):
    if jobs <= 1 or len(args_list) <= 1:
        return [func(a) for a in args_list]
    with multiprocessing.Pool(processes=jobs) as pool:
        return pool.map(func, args_list)


def _sim_cell(args):
    """One fixed-length cell: replication means pooled into mean + CI."""
    (lam, n_c, curve, horizon, warmup, reps, base_seed, label, ds, model,
     snr) = args
    paoti_means, paoi_means = [], []
    ci = (math.nan, math.nan)
    for r in range(reps):
        seed = derive_seed(base_seed, label, ds, model, snr, lam, n_c, r)
        res = run_sim(SimConfig(lam=lam, n_events=horizon, n_c=n_c,
                                curve=curve, seed=seed, warmup_frac=warmup))
        paoti_means.append(res.stats.mean_paoti)
        paoi_means.append(res.stats.mean_paoi)
        if reps == 1:
            ci = (res.stats.paoti_ci, res.stats.paoi_ci)
    if reps > 1:
        t_ci = 1.96 * float(np.std(paoti_means, ddof=1)) / math.sqrt(reps)
        i_ci = 1.96 * float(np.std(paoi_means, ddof=1)) / math.sqrt(reps)
        ci = (t_ci, i_ci)
    return (float(np.mean(paoti_means)), ci[0],
            float(np.mean(paoi_means)), ci[1])


def run_sweep(spec, curves, label, jobs=1):
    """Grid of (pair, SNR, lambda, n_c) cells -> list of ResultRow."""
    coords = [(ds, model, snr, lam, n_c)
              for ds, model in spec.pairs
              for snr in spec.snr_grid_db
              for lam in spec.lambda_grid
              for n_c in spec.n_c_grid]
    cells = []
    for ds, model, snr, lam, n_c in coords:
        curve = curve_for(curves, ds, model, snr)
        cells.append((ds, model, snr, lam, n_c, curve,
                      lookup_pc(curve, n_c)))

    sim_args, sim_slots = [], []
    rows = []
    for i, (ds, model, snr, lam, n_c, curve, p_c) in enumerate(cells):
        if lam * n_c >= 1.0:
            rows.append(ResultRow(ds.value, model.value, snr, lam, n_c, p_c,
                                  "unstable"))
            continue
        cf = {}
        if spec.mode != "simulation":
            cf = {"paoti_cf": paoti_mean(lam, n_c, p_c),
                  "paoi_cf": paoi_mean(lam, n_c)}
        rows.append(ResultRow(ds.value, model.value, snr, lam, n_c, p_c,
                              "ok", **cf))
        if spec.mode != "closed_form":
            sim_args.append((lam, n_c, curve, spec.horizon, spec.warmup_frac,
                             spec.replications, spec.base_seed, label,
                             ds.value, model.value, snr))
            sim_slots.append(i)

    for slot, (tm, tci, im, ici) in zip(sim_slots,
                                        _map_jobs(_sim_cell, sim_args, jobs)):
        base = rows[slot]
        rows[slot] = ResultRow(base.dataset, base.model, base.snr_db,
                               base.lam, base.n_c, base.p_c, base.status,
                               base.paoti_cf, base.paoi_cf, tm, tci, im, ici)
    return rows


def capped_controller(section, lam, utilization_cap):
    """Controller range capped so the queue load stays bounded.

    The transmitter knows its own arrival rate; codeword lengths loading
    the queue beyond ``utilization_cap`` are excluded from the search
    because peaks measured near saturation reflect backlog rather than
    the codeword choice, and the recovery transient corrupts several
    following measurements.
    """
    cc = section.controller
    cap = max(1, int(utilization_cap / lam))
    if cap >= cc.n_c_max:
        return cc, section.start_n_c
    capped = dataclasses.replace(cc, n_c_max=cap,
                                 n_c_min=min(cc.n_c_min, cap))
    return capped, min(section.start_n_c, cap)


def _compare_cell(args):
    """Paired fixed/adaptive runs sharing one seed (same sample path)."""
    (lam, curve, fixed_n_c, section, horizon, seed, utilization_cap) = args
    fixed = run_sim(SimConfig(lam=lam, n_events=horizon, n_c=fixed_n_c,
                              curve=curve, seed=seed))
    controller, start = capped_controller(section, lam, utilization_cap)
    dyn = run_sim(SimConfig(lam=lam, n_events=horizon, n_c=start,
                            curve=curve, mode="adaptive", seed=seed,
                            controller=controller,
                            binding=section.binding))
    return (fixed.stats.mean_paoti, dyn.stats.mean_paoti,
            dyn.stats.mean_nc)


def compare_dynamic(config, curves, pairs, snr_grid, jobs=1):
    """Fixed-length reference versus adaptive controller, paired seeds.

    Returns (cell_rows, summary_rows); the summary averages measured
    task-level peaks over the (SNR, lambda) grid per dataset-model pair
    and reports the percentage reduction.
    """
    cmp_cfg = config.compare
    coords, args_list = [], []
    for ds, model in pairs:
        for snr in snr_grid:
            for lam in cmp_cfg.lambda_grid:
                curve = curve_for(curves, ds, model, snr)
                seed = derive_seed(config.base_seed, "compare", ds.value,
                                   model.value, snr, lam)
                coords.append((ds, model, snr, lam))
                args_list.append((lam, curve, cmp_cfg.fixed_n_c,
                                  config.controller, cmp_cfg.horizon, seed,
                                  cmp_cfg.utilization_cap))

    results = _map_jobs(_compare_cell, args_list, jobs)
    cell_rows, by_pair = [], {}
    for (ds, model, snr, lam), (fx, dy, mnc) in zip(coords, results):
        red = 100.0 * (fx - dy) / fx
        cell_rows.append((ds.value, model.value, snr, lam, cmp_cfg.fixed_n_c,
                          fx, dy, red, mnc))
        by_pair.setdefault((ds.value, model.value), []).append((fx, dy))
    summary_rows = []
    for (ds, model), vals in by_pair.items():
        fx = float(np.mean([v[0] for v in vals]))
        dy = float(np.mean([v[1] for v in vals]))
        summary_rows.append((ds, model, fx, dy, 100.0 * (fx - dy) / fx))
    return cell_rows, summary_rows


def _validate_cell(args):
    """z-scores of simulated wait / peak means against closed form."""
    (i, lam, n_c, p_c, horizon, reps, base_seed, bias) = args
    sums = {"wait": [], "paoi": [], "paoti": []}
    ses = {"wait": [], "paoi": [], "paoti": []}
    for r in range(reps):
        seed = derive_seed(base_seed, "validate", i, r)
        res = run_sim(SimConfig(lam=lam, n_events=horizon, n_c=n_c, p_c=p_c,
                                seed=seed, service_bias=bias))
        s = res.stats
        sums["wait"].append(s.mean_wait)
        sums["paoi"].append(s.mean_paoi)
        sums["paoti"].append(s.mean_paoti)
        ses["wait"].append(s.wait_ci / 1.96)
        ses["paoi"].append(s.paoi_ci / 1.96)
        ses["paoti"].append(s.paoti_ci / 1.96)
    refs = {"wait": mean_waiting_time(lam, n_c),
            "paoi": paoi_mean(lam, n_c),
            "paoti": paoti_mean(lam, n_c, p_c)}
    out = []
    for metric in ("wait", "paoi", "paoti"):
        sim = float(np.mean(sums[metric]))
        se = float(np.sqrt(np.mean(np.square(ses[metric])) / reps))
        z = abs(sim - refs[metric]) / se if se > 0 else math.inf
        out.append((f"cell{i}", lam, n_c, p_c, metric, sim, refs[metric],
                    se, z, "pass" if z <= 3.0 else "FAIL"))
    return out


def run_validation(config, jobs=1):
    """Randomized closed-form cross-check; returns (rows, all_passed).

    Draws stable cells, simulates each with independent replications, and
    requires every simulated mean to land within 3 standard errors of its
    closed form. Also scans the two task-level peak formulas against each
    other over random parameters.
    """
    vc = config.validate
    rng = np.random.Generator(np.random.PCG64(
        np.random.SeedSequence(derive_seed(config.base_seed, "validate"))))

    worst = 0.0
    for _ in range(10_000):
        lam = rng.uniform(0.01, 0.9)
        n_c = int(rng.integers(1, 50))
        if lam * n_c >= 0.999:
            continue
        p_c = rng.uniform(0.05, 1.0)
        a = paoti_mean(lam, n_c, p_c)
        b = paoti_mean_compact(lam, n_c, p_c)
        worst = max(worst, abs(a - b) / a)
    rows = [("identity", math.nan, 0, math.nan, "paoti_forms", worst, 0.0,
             math.nan, math.nan, "pass" if worst <= 1e-9 else "FAIL")]

    args_list = []
    for i in range(vc.cells):
        lam = float(rng.uniform(0.03, 0.18))
        n_max = min(5, int(0.9 / lam))
        n_c = int(rng.integers(1, n_max + 1))
        p_c = float(rng.uniform(0.4, 1.0))
        args_list.append((i, lam, n_c, p_c, vc.horizon, vc.replications,
                          config.base_seed, vc.service_bias))
    for cell_rows in _map_jobs(_validate_cell, args_list, jobs):
        rows.extend(cell_rows)
    ok = all(r[-1] == "pass" for r in rows)
    return rows, ok


def fit_curve_rows(curves, lam):
    """Parametric fit plus optimal codeword length for every curve."""
    rows = []
    for key in sorted(curves):
        curve = curves[key]
        fit = fit_parametric(curve)
        star = optimal_nc(lam, curve, 1, int(curve.nc_values[-1]))
        rows.append((curve.dataset.value, curve.model.value, curve.snr_db,
                     fit.params.p_max, fit.params.alpha, fit.params.n0,
                     fit.rms_residual, int(fit.degenerate), star.n_c))
    return rows


def _cell_text(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    return repr(v)


def write_rows(path, header, rows):
    """CSV with repr-formatted floats; byte-stable across runs."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            if isinstance(row, ResultRow):
                row = (row.dataset, row.model, row.snr_db, row.lam, row.n_c,
                       row.p_c, row.status, row.paoti_cf, row.paoi_cf,
                       row.sim_paoti_mean, row.sim_paoti_ci,
                       row.sim_paoi_mean, row.sim_paoi_ci)
            w.writerow([_cell_text(v) for v in row])


def write_plot_data(path, header, rows, group_keys=3):
    """Gnuplot-friendly twin: space separated, blank line between groups
    (a group is a distinct prefix of ``group_keys`` leading columns)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# " + " ".join(header) + "\n")
        prev = None
        for row in rows:
            if isinstance(row, ResultRow):
                row = (row.dataset, row.model, row.snr_db, row.lam, row.n_c,
                       row.p_c, row.status, row.paoti_cf, row.paoi_cf,
                       row.sim_paoti_mean, row.sim_paoti_ci,
                       row.sim_paoi_mean, row.sim_paoi_ci)
            key = tuple(row[:group_keys])
            if prev is not None and key != prev:
                fh.write("\n")
            prev = key
            fh.write(" ".join(_cell_text(v) if _cell_text(v) else "nan"
                              for v in row) + "\n")
