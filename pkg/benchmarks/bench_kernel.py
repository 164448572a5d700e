#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-numpy fallback.

Times the three hot paths on a realistic career: single likelihood
evaluations, a full posterior chain, and one AIS annealing pass.  Run from
the repository root after building the extension:

    python benchmarks/bench_kernel.py
"""

from __future__ import annotations

import importlib.util
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from crease import _kernel_py  # noqa: E402
from crease.bayes import career_weights  # noqa: E402
from crease.career import load_career  # noqa: E402
from crease.evidence import temperature_schedule  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "src" / "crease" / "data" / "lara.txt"

PRIOR = (30.0, 20.0, 20.0, 3.0)


def load_backends():
    backends = [("numpy fallback", _kernel_py)]
    if importlib.util.find_spec("crease._kernel") is not None:
        from crease import _kernel

        backends.insert(0, ("compiled", _kernel))
    else:
        print("note: compiled kernel not built; benchmarking fallback only")
    return backends


def bench_loglike(mod, surv_w, dism_w, n=20_000):
    t0 = time.perf_counter()
    for _ in range(n):
        mod.loglike_varying(14.5, 60.2, 5.1, 2.8, surv_w, dism_w)
    return (time.perf_counter() - t0) / n


def bench_chain(mod, surv_w, dism_w, iters=100_000):
    theta0 = np.array([30.0, 30.0, 20.0, 3.0])
    steps = np.array([0.3, 0.3, 0.3, 0.3])
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    mod.mh_chain_varying(theta0, iters, 10_000, 10, steps, True, 0.44, 1.0,
                         surv_w, dism_w, *PRIOR, rng)
    return time.perf_counter() - t0


def bench_anneal(mod, surv_w, dism_w, temps=1000):
    betas = temperature_schedule(temps, 3.0)
    base = np.array([0.8, 0.8, 1.2, 1.2])
    theta0 = np.array([25.0, 35.0, 15.0, 2.0])
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    mod.anneal_varying(theta0, betas, 3, base, 10.0, surv_w, dism_w, *PRIOR, rng)
    return time.perf_counter() - t0


def main() -> None:
    career = load_career(DATA)
    surv_w, dism_w = career_weights(career)
    print(f"career: {career.player_id}, {career.num_innings} innings, "
          f"max score {career.max_score}")
    backends = load_backends()

    rows = []
    for name, mod in backends:
        ll = bench_loglike(mod, surv_w, dism_w)
        ch = bench_chain(mod, surv_w, dism_w)
        an = bench_anneal(mod, surv_w, dism_w)
        rows.append((name, ll, ch, an))

    print()
    print(f"{'backend':<16} {'loglike/eval':>14} {'chain 100k':>12} {'AIS pass':>10}")
    for name, ll, ch, an in rows:
        print(f"{name:<16} {ll * 1e6:>11.2f} us {ch:>10.2f} s {an:>8.2f} s")
    if len(rows) == 2:
        print()
        print(f"{'speedup':<16} {rows[1][1] / rows[0][1]:>13.1f}x "
              f"{rows[1][2] / rows[0][2]:>11.1f}x {rows[1][3] / rows[0][3]:>9.1f}x")


if __name__ == "__main__":
    main()
