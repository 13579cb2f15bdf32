"""Radial grid and quadrature in the measure r^{2k} dr.

Composite Gauss-Legendre panels cover (0, r_max].  Three structural choices
matter for the iteration integrals:

* r0 and 2 r0 are panel edges (the correction potential has a finite jump at
  r0, and the region inside 2 r0 is densified 2x),
* the first edge interval is split geometrically so the r^{2k} measure factor
  spans a bounded ratio per panel,
* beyond 2 r0 panel widths shrink so that the log of the weight phi^2 r^{2k}
  varies by at most ``log_span_limit`` per panel.  The nested integrals of the
  iteration divide by that weight at panel-local nodes, which amplifies any
  in-panel interpolation error by up to exp(span); capping the span keeps the
  amplified error at spectral accuracy.

Integrands are always combined with log-weights through a max-shift, so a
weight spanning 600 decades underflows gracefully instead of producing NaN.
r_max itself is the smallest radius where g*s0 reaches the overflow budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from numpy.polynomial import legendre as _leg

from .model import ModelParams
from .trialfn import TrialConfig, s0, s0_prime

__all__ = ["RadialGrid", "build_grid", "weighted_integral", "weighted_integral_scaled"]

MIN_POINTS_PER_UNIT = 64


class GridError(ValueError):
    pass


@lru_cache(maxsize=8)
def panel_rule(order: int):
    """Gauss-Legendre rule of given order on [-1, 1] plus integration operators.

    Returns (x, w, K, Kfull): nodes, weights, the order x order matrix mapping
    nodal values to antiderivative values at the nodes (anchored at -1), and
    the row mapping nodal values to the full-panel integral (identical to w,
    kept separate for clarity of the nested-update kernels).
    """
    x, w = _leg.leggauss(order)
    vand = _leg.legvander(x, order - 1)  # vand[i, l] = P_l(x_i)
    proj = ((2.0 * np.arange(order) + 1.0) / 2.0)[:, None] * (vand.T * w[None, :])
    K = np.zeros((order, order))
    Kfull = np.zeros(order)
    for j in range(order):
        anti = _leg.legint(proj[:, j], lbnd=-1.0)
        K[:, j] = _leg.legval(x, anti)
        Kfull[j] = _leg.legval(1.0, anti)
    return x, w, K, Kfull


@dataclass(frozen=True)
class RadialGrid:
    """Panelised radial mesh with plain-dr quadrature weights.

    ``nodes`` excludes r = 0 and r_max (Gauss points are interior to their
    panels); ``r_max`` records the truncation edge, which is also the last
    entry of ``panel_edges``.  The r^{2k} measure is applied per use through
    the log-weights fed to :func:`weighted_integral`.
    """

    nodes: np.ndarray
    weights: np.ndarray
    panel_edges: np.ndarray
    panel_order: int
    r_max: float
    points_per_unit: int
    overflow_budget: float

    @property
    def n_panels(self) -> int:
        return len(self.panel_edges) - 1

    @property
    def half_widths(self) -> np.ndarray:
        return 0.5 * np.diff(self.panel_edges)


def _find_r_max(p: ModelParams, budget: float) -> float:
    """Smallest radius where g*s0 reaches the overflow budget (bisection)."""
    lo = p.r0
    hi = 2.0 * p.r0
    for _ in range(80):
        if p.g * float(s0(hi, p)) >= budget:
            break
        hi *= 2.0
    else:
        raise GridError(f"r_max search failed: g*s0 never reached {budget}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if p.g * float(s0(mid, p)) >= budget:
            hi = mid
        else:
            lo = mid
    return hi


def build_grid(
    p: ModelParams,
    cfg: TrialConfig,
    points_per_unit: int = 96,
    overflow_budget: float = 300.0,
    panel_order: int = 16,
    log_span_limit: float = 6.0,
) -> RadialGrid:
    """Build the composite Gauss-Legendre grid for the given configuration."""
    if points_per_unit < MIN_POINTS_PER_UNIT:
        raise GridError(
            f"points_per_unit={points_per_unit} too low (minimum {MIN_POINTS_PER_UNIT})"
        )
    if cfg.params is not p and cfg.params != p:
        raise GridError("TrialConfig does not belong to the given ModelParams")
    m = panel_order
    r0 = p.r0
    r_max = _find_r_max(p, overflow_budget)

    dense = 2 * points_per_unit
    edges = [0.0]
    # [0, r0]: uniform at doubled density, first interval graded geometrically
    n1 = max(2, math.ceil(r0 * dense / m))
    block = np.linspace(0.0, r0, n1 + 1)
    edges += [block[1] / 4.0, block[1] / 2.0]
    edges += block[1:].tolist()
    # [r0, 2 r0]: uniform at doubled density
    n2 = max(2, math.ceil(r0 * dense / m))
    edges += np.linspace(r0, 2.0 * r0, n2 + 1)[1:].tolist()
    # (2 r0, r_max]: width capped by the log-weight span per panel
    base_w = m / float(points_per_unit)
    r = 2.0 * r0
    while r < r_max - 1e-12 * r_max:
        slope = 2.0 * p.g * float(s0_prime(r + base_w, p)) + 5.0
        width = min(base_w, log_span_limit / slope)
        r = min(r_max, r + width)
        edges.append(r)
    panel_edges = np.asarray(edges)

    x, w, _, _ = panel_rule(m)
    half = 0.5 * np.diff(panel_edges)
    mid = 0.5 * (panel_edges[:-1] + panel_edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return RadialGrid(
        nodes=nodes,
        weights=weights,
        panel_edges=panel_edges,
        panel_order=m,
        r_max=r_max,
        points_per_unit=points_per_unit,
        overflow_budget=overflow_budget,
    )


def weighted_integral_scaled(
    f: np.ndarray, grid: RadialGrid, log_weight: np.ndarray
) -> Tuple[float, float]:
    """Integral of f against exp(log_weight) dr, as (mantissa, log_scale).

    The true value is mantissa * exp(log_scale); the max-shift keeps every
    intermediate in range for weights spanning hundreds of decades.
    """
    f = np.asarray(f, dtype=float)
    log_weight = np.asarray(log_weight, dtype=float)
    if f.shape != grid.nodes.shape or log_weight.shape != grid.nodes.shape:
        raise ValueError("samples must align with the grid nodes")
    shift = float(np.max(log_weight))
    if not math.isfinite(shift):
        raise ValueError("all log-weights are -inf; nothing to integrate")
    mant = float(np.dot(grid.weights, f * np.exp(log_weight - shift)))
    return mant, shift


def weighted_integral(f: np.ndarray, grid: RadialGrid, log_weight: np.ndarray) -> float:
    """Integral of f against exp(log_weight) dr, in ordinary scale."""
    mant, shift = weighted_integral_scaled(f, grid, log_weight)
    return mant * math.exp(shift)
