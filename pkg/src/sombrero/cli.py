"""Command-line experiment harness.

Subcommands: ``solve`` (one configuration, JSON report plus optional curve
CSV), ``table1`` (the five benchmark rows with reference values and oracle
cross-check), ``figures`` (wave-function shape data as CSV), ``oracle`` (the
finite-difference solver alone), and ``sweep`` (a (g, A) phase map of the
ground-state shape).  Files are written with 12 significant digits, comma
separators and LF line endings, and are byte-stable across reruns of the same
configuration.  The default output directory comes from SOMBRERO_OUTDIR.
"""
from __future__ import annotations

import json
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import click
import numpy as np

from .iteration import SolverReport, extrapolate_to_zero as _extrap_origin, solve
from .model import ModelParams
from .numerics import build_grid
from .oracle import ground_energy_richardson
from .trialfn import TrialConfig, build_trial

# reference converged energies for N=3, by (g, A) row
TABLE1_ROWS: List[Tuple[float, float, float]] = [
    (0.5, 2.0, 1.3772),
    (1.0, 2.0, 2.1517),
    (2.0, 2.0, 4.1094),
    (1.0, 1.0, 1.8392),
    (1.0, 3.0, 2.4418),
]
TABLE1_TOL = 5e-3
ORACLE_TOL = 1e-3


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _outdir(path: Optional[str]) -> Path:
    base = path or os.environ.get("SOMBRERO_OUTDIR") or "."
    out = Path(base)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
            fh.write("\n")


def _run_solve(
    n_dim: int,
    g: float,
    a_shape: float,
    a_trial: float,
    tol: float,
    max_iter: int,
    anchor: str,
    density: int,
    budget: float,
) -> SolverReport:
    p = ModelParams(n_dim=n_dim, g=g, a_shape=a_shape)
    cfg = TrialConfig(a=a_trial, params=p)
    grid = build_grid(p, cfg, points_per_unit=density, overflow_budget=budget)
    return solve(cfg, grid, tol=tol, max_iter=max_iter, anchor=anchor)


def _solver_options(fn):
    fn = click.option("--a-trial", type=float, default=2.0, show_default=True,
                      help="Trial-function parameter a (results must not depend on it).")(fn)
    fn = click.option("--tol", type=float, default=1e-6, show_default=True)(fn)
    fn = click.option("--max-iter", type=int, default=60, show_default=True)(fn)
    fn = click.option("--anchor", type=click.Choice(["zero", "inf"]), default="zero",
                      show_default=True, help="Boundary where the iterate is pinned to 1.")(fn)
    fn = click.option("--density", type=int, default=96, show_default=True,
                      help="Quadrature points per unit radius.")(fn)
    fn = click.option("--budget", type=float, default=300.0, show_default=True,
                      help="Overflow budget fixing the truncation radius.")(fn)
    fn = click.option("--outdir", type=click.Path(), default=None,
                      help="Output directory (default: $SOMBRERO_OUTDIR or '.').")(fn)
    return fn


@click.group()
def main() -> None:
    """Ground states of the N-dimensional sombrero potential."""


@main.command("solve")
@click.option("--n", "n_dim", type=int, default=3, show_default=True, help="Dimension N.")
@click.option("--g", type=float, required=True, help="Coupling g > 0.")
@click.option("--A", "a_shape", type=float, required=True, help="Shape constant A > 0.")
@_solver_options
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True, help="csv additionally dumps the curve samples.")
def cmd_solve(n_dim, g, a_shape, a_trial, tol, max_iter, anchor, density, budget,
              outdir, fmt) -> None:
    """Solve one configuration and write the report."""
    out = _outdir(outdir)
    report = _run_solve(n_dim, g, a_shape, a_trial, tol, max_iter, anchor, density, budget)
    path = out / "report.json"
    path.write_text(report.to_json())
    click.echo(f"wrote {path}")
    if fmt == "csv":
        tf = build_trial(TrialConfig(a=a_trial, params=report.params))
        r = report.r_nodes
        phi = np.exp(tf.log_phi(r))
        h = tf.h(r)
        f0 = _extrap_origin(r, report.final_f)
        rows = zip(
            [0.0, *map(float, r)],
            [float(np.exp(tf.log_phi(0.0))), *map(float, phi)],
            [1.0, *map(float, report.final_psi)],
            [float(tf.h(0.0)), *map(float, h)],
            [f0, *map(float, report.final_f)],
        )
        cpath = out / "curves.csv"
        _write_csv(cpath, ["r", "phi", "psi", "h", "f"], rows)
        click.echo(f"wrote {cpath}")
    status = "converged" if report.converged else f"NOT converged ({report.failure})"
    click.echo(f"E = {report.energy:.6f} after {report.iterations} iterations; {status}")
    if not report.converged:
        sys.exit(1)


@main.command("table1")
@_solver_options
@click.option("--oracle-step", type=float, default=0.01, show_default=True)
def cmd_table1(a_trial, tol, max_iter, anchor, density, budget, outdir, oracle_step) -> None:
    """Run the five benchmark rows and compare with references and the oracle."""
    out = _outdir(outdir)
    rows = []
    all_ok = True
    for g, a_shape, ref in TABLE1_ROWS:
        report = _run_solve(3, g, a_shape, a_trial, tol, max_iter, anchor, density, budget)
        p = report.params
        oracle_e, _ = ground_energy_richardson(
            p, base_step=oracle_step, r_max=report.grid_r_max + 1.0, levels=2
        )
        dev_ref = abs(report.energy - ref)
        dev_oracle = abs(report.energy - oracle_e)
        ok = report.converged and dev_ref <= TABLE1_TOL and dev_oracle <= ORACLE_TOL
        all_ok &= ok
        rows.append(
            (g, a_shape, ref, report.energy, oracle_e, dev_ref, dev_oracle,
             str(report.converged), "pass" if ok else "fail")
        )
        click.echo(
            f"g={g} A={a_shape}: E={report.energy:.6f} ref={ref} oracle={oracle_e:.6f} "
            f"{'pass' if ok else 'FAIL'}"
        )
    path = out / "table1.csv"
    _write_csv(
        path,
        ["g", "A", "reference", "energy", "oracle", "dev_reference", "dev_oracle",
         "converged", "status"],
        rows,
    )
    click.echo(f"wrote {path}")
    if not all_ok:
        sys.exit(1)


def _curve_on(r_plot: np.ndarray, report: SolverReport) -> np.ndarray:
    """Converged wave function resampled and normalized to its own maximum."""
    psi = np.interp(r_plot, np.concatenate([[0.0], report.r_nodes]),
                    np.concatenate([[1.0], report.final_psi]))
    return psi / psi.max()


@main.command("figures")
@_solver_options
@click.option("--r-plot-max", type=float, default=4.0, show_default=True)
@click.option("--r-plot-step", type=float, default=0.02, show_default=True)
def cmd_figures(a_trial, tol, max_iter, anchor, density, budget, outdir,
                r_plot_max, r_plot_step) -> None:
    """Emit the wave-function shape curves (trial vs converged; A- and g-families)."""
    out = _outdir(outdir)
    r_plot = np.arange(0.0, r_plot_max + 0.5 * r_plot_step, r_plot_step)

    def run(g, a_shape):
        return _run_solve(3, g, a_shape, a_trial, tol, max_iter, anchor, density, budget)

    base = run(1.0, 2.0)
    if not base.converged:
        raise click.ClickException("base configuration (g=1, A=2) did not converge")
    tf = build_trial(TrialConfig(a=a_trial, params=base.params))
    log_phi_plot = tf.log_phi(np.maximum(r_plot, tf.clamp_radius))
    phi_plot = np.exp(log_phi_plot - log_phi_plot.max())
    _write_csv(
        out / "fig1.csv",
        ["r", "trial_phi", "converged_psi"],
        zip(map(float, r_plot), map(float, phi_plot), map(float, _curve_on(r_plot, base))),
    )

    fam_a = {2.0: base}
    for a_shape in (1.0, 3.0):
        fam_a[a_shape] = run(1.0, a_shape)
    _write_csv(
        out / "fig2.csv",
        ["r", "psi_A1", "psi_A2", "psi_A3"],
        zip(map(float, r_plot), *(map(float, _curve_on(r_plot, fam_a[x])) for x in (1.0, 2.0, 3.0))),
    )

    fam_g = {1.0: base}
    for g in (0.5, 2.0):
        fam_g[g] = run(g, 2.0)
    _write_csv(
        out / "fig3.csv",
        ["r", "psi_g05", "psi_g1", "psi_g2"],
        zip(map(float, r_plot), *(map(float, _curve_on(r_plot, fam_g[x])) for x in (0.5, 1.0, 2.0))),
    )
    bad = [k for k, rep in {**fam_a, **fam_g}.items() if not rep.converged]
    click.echo(f"wrote {out / 'fig1.csv'}, {out / 'fig2.csv'}, {out / 'fig3.csv'}")
    if bad:
        raise click.ClickException(f"non-convergent curves: {bad}")


@main.command("oracle")
@click.option("--n", "n_dim", type=int, default=3, show_default=True)
@click.option("--g", type=float, required=True)
@click.option("--A", "a_shape", type=float, required=True)
@click.option("--step", type=float, default=0.01, show_default=True)
@click.option("--r-max", type=float, default=8.0, show_default=True)
@click.option("--levels", type=int, default=3, show_default=True)
@click.option("--outdir", type=click.Path(), default=None)
def cmd_oracle(n_dim, g, a_shape, step, r_max, levels, outdir) -> None:
    """Finite-difference ground energy with step-halving extrapolation."""
    out = _outdir(outdir)
    p = ModelParams(n_dim=n_dim, g=g, a_shape=a_shape)
    extrap, raw = ground_energy_richardson(p, base_step=step, r_max=r_max, levels=levels)
    doc = {
        "params": {"n_dim": n_dim, "g": g, "a_shape": a_shape},
        "steps": [step / 2**i for i in range(levels)],
        "energies": raw,
        "extrapolated": extrap,
    }
    path = out / "oracle.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    click.echo(f"wrote {path}")
    click.echo(f"E = {extrap:.8f}")


@main.command("sweep")
@click.option("--g-min", type=float, default=0.5, show_default=True)
@click.option("--g-max", type=float, default=2.0, show_default=True)
@click.option("--g-steps", type=int, default=4, show_default=True)
@click.option("--a-min", "a_shape_min", type=float, default=1.0, show_default=True)
@click.option("--a-max", "a_shape_max", type=float, default=3.0, show_default=True)
@click.option("--a-steps", "a_shape_steps", type=int, default=3, show_default=True)
@_solver_options
def cmd_sweep(g_min, g_max, g_steps, a_shape_min, a_shape_max, a_shape_steps,
              a_trial, tol, max_iter, anchor, density, budget, outdir) -> None:
    """Phase map of the ground-state shape over a (g, A) lattice.

    Per-point failures are recorded inline and the sweep continues.
    """
    out = _outdir(outdir)
    gs = np.linspace(g_min, g_max, g_steps) if g_steps > 0 else np.array([])
    As = np.linspace(a_shape_min, a_shape_max, a_shape_steps) if a_shape_steps > 0 else np.array([])
    rows = []
    for g in gs:
        for a_shape in As:
            try:
                rep = _run_solve(3, float(g), float(a_shape), a_trial, tol, max_iter,
                                 anchor, density, budget)
                shape = "ring" if rep.argmax_radius > 0.0 else "origin"
                rows.append((float(g), float(a_shape), rep.energy, rep.argmax_radius,
                             shape, str(rep.converged)))
            except Exception as exc:  # per-point failure must not kill the sweep
                rows.append((float(g), float(a_shape), float("nan"), float("nan"),
                             "error", f"error: {exc}"))
    path = out / "sweep.csv"
    _write_csv(path, ["g", "A", "energy", "argmax_radius", "shape", "converged"], rows)
    click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
