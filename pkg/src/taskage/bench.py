"""Timing harness comparing the compiled and pure-Python kernels.

Both backends run the same pre-drawn inputs, outputs are checked for
bit-identity as a side effect, and the best wall time of a few repeats is
reported. Timings are the one intentionally non-reproducible output in
this package.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .kernels import _engine_py

try:
    from .kernels import _engine
except ImportError:
    _engine = None


@dataclass(frozen=True)
class BenchResult:
    backend: str
    kernel: str
    n_events: int
    best_seconds: float

    @property
    def events_per_second(self):
        return self.n_events / self.best_seconds


def _time_call(func, args, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = func(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def run_bench(n_events=1_000_000, repeats=3, lam=0.09, n_c=5, p_c=0.9,
              seed=0):
    """Time both backends on identical fixed and adaptive workloads."""
    if n_events < 1 or repeats < 1:
        raise ValidationError("n_events and repeats must be >= 1")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    y = rng.exponential(1.0 / lam, n_events)
    u_success = rng.random(n_events)
    u_delta = rng.random(n_events)
    table = np.zeros(17, dtype=np.float64)
    for i in range(1, 17):
        table[i] = p_c * (1.0 - np.exp(-0.3 * i))
    adaptive_args = (y, u_success, u_delta, 1, n_c, table, 1, 0.0, 0, 1, 16, 0)

    backends = [("python", _engine_py)]
    if _engine is not None:
        backends.insert(0, ("c", _engine))

    results = []
    reference = {}
    for name, mod in backends:
        t_fixed, out_fixed = _time_call(
            mod.simulate_fixed, (y, u_success, float(n_c), p_c), repeats)
        t_adapt, out_adapt = _time_call(
            mod.simulate_adaptive, adaptive_args, repeats)
        results.append(BenchResult(name, "fixed", n_events, t_fixed))
        results.append(BenchResult(name, "adaptive", n_events, t_adapt))
        for kernel, out in (("fixed", out_fixed), ("adaptive", out_adapt)):
            if kernel in reference:
                for a, b in zip(reference[kernel], out):
                    ok = (np.array_equal(a, b, equal_nan=True)
                          if isinstance(a, np.ndarray) else a == b)
                    if not ok:
                        raise ValidationError(
                            f"backends disagree on the {kernel} kernel")
            else:
                reference[kernel] = out
    return results


def speedups(results):
    """Compiled-over-Python speedup per kernel (empty without both)."""
    by = {(r.backend, r.kernel): r.best_seconds for r in results}
    out = {}
    for kernel in ("fixed", "adaptive"):
        if ("c", kernel) in by and ("python", kernel) in by:
            out[kernel] = by[("python", kernel)] / by[("c", kernel)]
    return out
