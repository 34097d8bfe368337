"""Command line interface.

Verbs: ``sweep-nc``, ``sweep-lambda``, ``compare-dynamic``, ``validate``,
``fit-curves``, plus ``bench`` for kernel timings. Exit codes: 0 success,
1 validation failure, 2 configuration error. All verbs except ``bench``
write byte-identical outputs when re-run with the same config and seed.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from .. import bench as bench_mod
from ..errors import ConfigError, ValidationError
from ..kernels import BACKEND
from .config import DEFAULT_PAIRS, DEFAULT_SNR_GRID, NC_SWEEP_LAMBDAS, \
    build_sweep_spec, load_config
from .sweeps import (COMPARE_CELL_COLUMNS, COMPARE_SUMMARY_COLUMNS,
                     FIT_COLUMNS, SWEEP_COLUMNS, VALIDATE_COLUMNS,
                     compare_dynamic, fit_curve_rows, resolve_curves,
                     run_sweep, run_validation, write_plot_data, write_rows)


def _add_common(p):
    p.add_argument("--config", metavar="PATH",
                   help="TOML experiment config (defaults used if omitted)")
    p.add_argument("--out", metavar="DIR", default=".",
                   help="output directory (default: current directory)")
    p.add_argument("--seed", type=int, metavar="U64",
                   help="override the base seed from the config")
    p.add_argument("--jobs", type=int, default=1, metavar="N",
                   help="worker processes for independent cells (default 1)")
    p.add_argument("--plot-data", action="store_true",
                   help="also write gnuplot-style .dat files")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="taskage",
        description="Peak-age analytics and simulation for task-oriented "
                    "status updating")
    sub = parser.add_subparsers(dest="verb", required=True)

    for verb, help_text in (
            ("sweep-nc", "task-level peak age versus codeword length"),
            ("sweep-lambda", "task-level peak age versus arrival rate"),
            ("compare-dynamic", "adaptive controller versus fixed length"),
            ("validate", "cross-check simulation against closed form"),
            ("fit-curves", "fit parametric accuracy curves"),
    ):
        p = sub.add_parser(verb, help=help_text)
        _add_common(p)
        p.set_defaults(func=_DISPATCH[verb])

    p = sub.add_parser("bench", help="time the kernel backends")
    _add_common(p)
    p.add_argument("--events", type=int, default=1_000_000)
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=_cmd_bench)
    return parser


def _setup(args):
    config = load_config(args.config)
    if args.seed is not None:
        config = dataclasses.replace(config, base_seed=args.seed)
    if args.jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    os.makedirs(args.out, exist_ok=True)
    return config


def _emit(args, name, header, rows, group_keys=3):
    path = os.path.join(args.out, name + ".csv")
    write_rows(path, header, rows)
    if args.plot_data:
        write_plot_data(os.path.join(args.out, name + ".dat"), header, rows,
                        group_keys)
    return path


def _cmd_sweep(args, verb):
    config = _setup(args)
    spec = build_sweep_spec(config, verb)
    curves = resolve_curves(config.curves)
    label = f"sweep-{verb}"
    rows = run_sweep(spec, curves, label, jobs=args.jobs)
    path = _emit(args, label.replace("-", "_"), SWEEP_COLUMNS, rows)
    n_unstable = sum(r.status == "unstable" for r in rows)
    print(f"{label}: wrote {len(rows)} rows ({n_unstable} unstable) "
          f"to {path}")
    return 0


def _cmd_sweep_nc(args):
    return _cmd_sweep(args, "nc")


def _cmd_sweep_lambda(args):
    return _cmd_sweep(args, "lambda")


def _cmd_compare(args):
    config = _setup(args)
    curves = resolve_curves(config.curves)
    pairs = config.sweep.pairs or DEFAULT_PAIRS
    snr_grid = config.sweep.snr_grid_db or DEFAULT_SNR_GRID
    cells, summary = compare_dynamic(config, curves, pairs, snr_grid,
                                     jobs=args.jobs)
    _emit(args, "compare_dynamic_cells", COMPARE_CELL_COLUMNS, cells, 3)
    path = _emit(args, "compare_dynamic", COMPARE_SUMMARY_COLUMNS, summary, 2)
    for ds, model, fx, dy, red in summary:
        print(f"{ds}/{model}: fixed {fx:.2f} -> dynamic {dy:.2f} "
              f"({red:.1f}% reduction)")
    print(f"compare-dynamic: wrote {len(cells)} cells to {path}")
    return 0


def _cmd_validate(args):
    config = _setup(args)
    rows, ok = run_validation(config, jobs=args.jobs)
    path = _emit(args, "validate_report", VALIDATE_COLUMNS, rows, 1)
    n_fail = sum(r[-1] != "pass" for r in rows)
    for r in rows:
        if r[-1] != "pass":
            print(f"FAIL {r[0]} {r[4]}: sim {r[5]:.4f} vs ref {r[6]:.4f} "
                  f"(z = {r[8]:.1f})")
    print(f"validate: {len(rows) - n_fail}/{len(rows)} checks passed; "
          f"report at {path}")
    return 0 if ok else 1


def _cmd_fit_curves(args):
    config = _setup(args)
    curves = resolve_curves(config.curves)
    lam = (config.sweep.lambda_grid or NC_SWEEP_LAMBDAS)[0]
    rows = fit_curve_rows(curves, lam)
    path = _emit(args, "curve_fits", FIT_COLUMNS, rows, 2)
    print(f"fit-curves: wrote {len(rows)} fits (lambda = {lam:g}) to {path}")
    return 0


def _cmd_bench(args):
    _setup(args)
    results = bench_mod.run_bench(n_events=args.events,
                                  repeats=args.repeats)
    print(f"active backend: {BACKEND}")
    for r in results:
        print(f"{r.backend:>7} {r.kernel:<9} {r.n_events:>9} events  "
              f"{r.best_seconds * 1e3:8.2f} ms  "
              f"{r.events_per_second / 1e6:7.2f} M events/s")
    for kernel, s in bench_mod.speedups(results).items():
        print(f"speedup ({kernel}): {s:.1f}x")
    return 0


_DISPATCH = {
    "sweep-nc": _cmd_sweep_nc,
    "sweep-lambda": _cmd_sweep_lambda,
    "compare-dynamic": _cmd_compare,
    "validate": _cmd_validate,
    "fit-curves": _cmd_fit_curves,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
