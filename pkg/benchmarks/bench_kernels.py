#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure fallback.

Times the three scan kernels on realistic inputs (arrays taken from an actual
solve and an actual oracle matrix) plus one end-to-end solve and oracle run
per backend.  Run after `python setup.py build_ext --inplace` (or an install)
to have the compiled side available; without it only the pure numbers print.

    python benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from sombrero import ModelParams, TrialConfig, build_grid, build_trial
from sombrero.kernels import _pure
from sombrero.numerics import panel_rule
from sombrero.oracle import build_hamiltonian

try:
    from sombrero.kernels import _core
except ImportError:
    _core = None


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    p = ModelParams(n_dim=3, g=1.0, a_shape=2.0)
    cfg = TrialConfig(a=2.0, params=p)
    grid = build_grid(p, cfg)
    tf = build_trial(cfg)
    logphi = tf.log_phi(grid.nodes)
    h = tf.h(grid.nodes)
    logw = np.ascontiguousarray(2.0 * logphi + 2.0 * p.k * np.log(grid.nodes))
    s = np.ascontiguousarray(0.1 - h)
    halfw = np.ascontiguousarray(grid.half_widths)
    _, _, K, Kfull = panel_rule(grid.panel_order)
    K = np.ascontiguousarray(K)
    Kfull = np.ascontiguousarray(Kfull)

    ham = build_hamiltonian(p, 0.0025, 8.0)
    d = np.ascontiguousarray(ham.diag)
    e = np.ascontiguousarray(ham.offdiag)
    e2 = np.ascontiguousarray(ham.offdiag**2)
    rhs = np.ascontiguousarray(np.ones_like(d))
    x_probe = float(np.min(ham.diag))

    backends = [("pure", _pure)] + ([("compiled", _core)] if _core else [])
    rows = []
    for name, mod in backends:
        t_nested = timeit(
            lambda: mod.nested_update(logw, s, halfw, grid.panel_order, K, Kfull, False),
            args.repeat,
        )
        t_sturm = timeit(lambda: mod.sturm_count(d, e2, x_probe), args.repeat)
        t_solve = timeit(lambda: mod.tridiag_solve(d, e, x_probe - 1e-8, rhs), args.repeat)
        rows.append((name, t_nested, t_sturm, t_solve))
        print(
            f"{name:9s}  nested_update({len(logw)} nodes): {t_nested*1e3:8.3f} ms   "
            f"sturm_count(n={len(d)}): {t_sturm*1e3:8.3f} ms   "
            f"tridiag_solve: {t_solve*1e3:8.3f} ms"
        )
    if len(rows) == 2:
        _, pn, ps, pt = rows[0]
        _, cn, cs, ct = rows[1]
        print(
            f"speedup    nested_update: {pn / cn:6.1f}x   "
            f"sturm_count: {ps / cs:6.1f}x   tridiag_solve: {pt / ct:6.1f}x"
        )

    # end-to-end timings under whichever backend is active in this process
    from sombrero import kernels, solve
    from sombrero.oracle import ground_energy_richardson

    t0 = time.perf_counter()
    rep = solve(cfg, grid)
    t_solve_e2e = time.perf_counter() - t0
    t0 = time.perf_counter()
    ground_energy_richardson(p, 0.01, 8.0, levels=3)
    t_oracle = time.perf_counter() - t0
    print(
        f"\nactive backend: {kernels.BACKEND}   "
        f"solve: {t_solve_e2e*1e3:.1f} ms ({rep.iterations} iterations)   "
        f"oracle 3-level ladder: {t_oracle*1e3:.1f} ms"
    )
    print("rerun with SOMBRERO_PURE=1 to time the end-to-end path on the fallback")


if __name__ == "__main__":
    main()
