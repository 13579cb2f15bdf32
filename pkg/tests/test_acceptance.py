"""Acceptance gate: every primary criterion at its stated tolerance.

Each test prints one pass/fail line so a plain ``pytest -s
tests/test_acceptance.py`` reads as a checklist.  Tolerances are fixed here,
not tuned at runtime.
"""
import time

import numpy as np

from sombrero import (
    ModelParams,
    TrialConfig,
    ground_energy_richardson,
    solve,
)
from sombrero.trialfn import s0, s0_prime, s1, s1_curvature, s1_prime

from conftest import EXACT_ENERGY_N3, TABLE1, exact_psi
from test_trialfn import master_residual

ENERGY_TOL_EXACT = 2e-3
PSI_SUP_TOL = 1e-4
TABLE_TOL = 5e-3
ORACLE_TOL = 1e-3
A_INDEPENDENCE_TOL = 5e-4
MASTER_SUP_TOL = 1e-4
IDENTITY_RTOL = 1e-6
CONTRACTION_FACTOR = 3.0
RUNTIME_LIMIT_S = 5.0


def report(flag: bool, label: str, detail: str) -> bool:
    print(f"[{'PASS' if flag else 'FAIL'}] {label}: {detail}")
    return flag


def test_criterion_1_analytic_energy_and_runtime():
    p = ModelParams(n_dim=3, g=1.0, a_shape=2.0)
    cfg = TrialConfig(a=2.0, params=p)
    t0 = time.perf_counter()
    rep = solve(cfg, tol=1e-6)
    elapsed = time.perf_counter() - t0
    dev = abs(rep.energy - EXACT_ENERGY_N3)
    ok = rep.converged and dev <= ENERGY_TOL_EXACT and elapsed <= RUNTIME_LIMIT_S
    assert report(
        ok,
        "criterion 1 (analytic-case energy)",
        f"E={rep.energy:.6f}, |dev|={dev:.2e} <= {ENERGY_TOL_EXACT}, "
        f"runtime {elapsed:.2f}s <= {RUNTIME_LIMIT_S}s",
    )


def test_criterion_2_analytic_wave_function(analytic_report):
    rep = analytic_report
    r = np.concatenate([[0.0], rep.r_nodes])
    psi = np.concatenate([[1.0], rep.final_psi])
    mask = r <= 3.0
    sup = float(np.abs(psi[mask] - exact_psi(r[mask])).max())
    assert report(
        sup <= PSI_SUP_TOL,
        "criterion 2 (analytic-case wave function)",
        f"sup|psi - exact| = {sup:.2e} <= {PSI_SUP_TOL} on [0, 3]",
    )


def test_criterion_3_reference_energies(table1_reports):
    devs = {}
    for g, a_shape, ref in TABLE1:
        rep = table1_reports[(g, a_shape)]
        assert rep.converged
        devs[(g, a_shape)] = abs(rep.energy - ref)
    worst = max(devs.values())
    assert report(
        worst <= TABLE_TOL,
        "criterion 3 (benchmark energies)",
        "; ".join(f"({g},{A}): {d:.1e}" for (g, A), d in devs.items())
        + f"; all <= {TABLE_TOL}",
    )


def test_criterion_4_oracle_cross_check(table1_reports):
    worst_dev = 0.0
    ratios = []
    for g, a_shape, _ in TABLE1:
        rep = table1_reports[(g, a_shape)]
        p = rep.params
        extrap, raw = ground_energy_richardson(
            p, base_step=0.01, r_max=rep.grid_r_max + 1.0, levels=3
        )
        worst_dev = max(worst_dev, abs(rep.energy - extrap))
        ratios.append((raw[1] - raw[0]) / (raw[2] - raw[1]))
    second_order = all(3.3 < r < 4.7 for r in ratios)
    ok = worst_dev <= ORACLE_TOL and second_order
    assert report(
        ok,
        "criterion 4 (independent oracle)",
        f"max |iteration - oracle| = {worst_dev:.1e} <= {ORACLE_TOL}; "
        f"step-halving ratios {['%.2f' % r for r in ratios]} ~ 4",
    )


def test_criterion_5_shape_transition(table1_reports):
    origin_rows = [(0.5, 2.0), (1.0, 2.0), (1.0, 1.0)]
    ring_rows = [(2.0, 2.0), (1.0, 3.0)]
    origin_ok = all(table1_reports[k].argmax_radius == 0.0 for k in origin_rows)
    ring_vals = {k: table1_reports[k].argmax_radius for k in ring_rows}
    ring_ok = ring_vals[(2.0, 2.0)] > 0.2 and ring_vals[(1.0, 3.0)] > 0.0
    assert report(
        origin_ok and ring_ok,
        "criterion 5 (shape transition)",
        f"origin rows at 0: {origin_ok}; ring maxima "
        + ", ".join(f"({g},{A})={v:.3f}" for (g, A), v in ring_vals.items()),
    )


def test_criterion_6_trial_parameter_independence():
    p = ModelParams(n_dim=3, g=1.0, a_shape=2.0)
    energies = []
    for a in (2.0, 3.0, 4.0, 5.0):
        rep = solve(TrialConfig(a=a, params=p), tol=1e-8)
        assert rep.converged
        energies.append(rep.energy)
    spread = max(energies) - min(energies)
    assert report(
        spread <= A_INDEPENDENCE_TOL,
        "criterion 6 (trial-parameter independence)",
        f"spread over a in (2,3,4,5) = {spread:.1e} <= {A_INDEPENDENCE_TOL}",
    )


def test_criterion_7_master_algebra():
    rng = np.random.default_rng(20240817)
    dims = [3, 1, 2, 5, 4, 3, 2, 1, 5, 4]
    worst_master = 0.0
    for n_dim in dims:
        g = rng.uniform(0.5, 2.0)
        big_a = rng.uniform(1.0, 3.0)
        a = rng.uniform(1.0, 5.0)
        cfg = TrialConfig(a=a, params=ModelParams(n_dim=n_dim, g=g, a_shape=big_a))
        r_hi = 0.9 * (4.0 * 300.0 / g) ** 0.25
        r = np.arange(0.05, r_hi, 1e-3)
        worst_master = max(worst_master, float(np.abs(master_residual(cfg, r)).max()))

    # antiderivative consistency and the curvature identity at fixed draws
    cfg = TrialConfig(a=2.0, params=ModelParams(n_dim=3, g=1.0, a_shape=2.0))
    p = cfg.params
    eps = 1e-5
    worst_anti = 0.0
    for r in np.linspace(0.2, 4.0 * p.r0, 20):
        d0 = (float(s0(r + eps, p)) - float(s0(r - eps, p))) / (2 * eps)
        d1 = (float(s1(r + eps, cfg)) - float(s1(r - eps, cfg))) / (2 * eps)
        worst_anti = max(
            worst_anti,
            abs(d0 / float(s0_prime(r, p)) - 1.0) if s0_prime(r, p) != 0 else 0.0,
            abs(d1 / float(s1_prime(r, cfg)) - 1.0),
        )
    worst_curv = 0.0
    for r in (0.5, 1.0, 2.0):
        s1pp = (float(s1_prime(r + eps, cfg)) - float(s1_prime(r - eps, cfg))) / (2 * eps)
        direct = 0.5 * (float(s1_prime(r, cfg)) ** 2 - s1pp)
        worst_curv = max(worst_curv, abs(float(s1_curvature(r, cfg)) / direct - 1.0))

    ok = (
        worst_master <= MASTER_SUP_TOL
        and worst_anti <= IDENTITY_RTOL
        and worst_curv <= IDENTITY_RTOL
    )
    assert report(
        ok,
        "criterion 7 (master algebra)",
        f"residual sup over 10 draws = {worst_master:.1e} <= {MASTER_SUP_TOL}; "
        f"antiderivative rel err = {worst_anti:.1e}; "
        f"curvature identity rel err = {worst_curv:.1e} <= {IDENTITY_RTOL}",
    )


def test_criterion_8_contraction_rate(table1_reports):
    details = []
    ok = True
    for g, a_shape, _ in TABLE1:
        rep = table1_reports[(g, a_shape)]
        diffs = np.abs(np.diff(rep.deltas))
        floor = 1e-8 * max(1.0, abs(rep.energy))
        ratios = []
        for n in range(1, len(diffs) - 1):  # diffs[n] is |delta_{n+1} - delta_n|
            if diffs[n] <= floor or diffs[n + 1] <= floor:
                break
            ratios.append(diffs[n] / diffs[n + 1])
        row_ok = len(ratios) >= 1 and all(r >= CONTRACTION_FACTOR for r in ratios)
        ok &= row_ok
        details.append(f"({g},{a_shape}): min ratio {min(ratios):.2f}" if ratios else
                       f"({g},{a_shape}): converged immediately")
    assert report(
        ok,
        "criterion 8 (contraction rate)",
        "; ".join(details) + f"; all >= {CONTRACTION_FACTOR}",
    )
