"""Problem definition: parameters, potential, radial operator probe, exact case.

The model is the radial Schroedinger problem in N dimensions

    (-1/2 (1/r^{2k}) d/dr r^{2k} d/dr + V(r)) psi = E psi,   k = (N-1)/2,

with the sombrero-shaped well V(r) = (1/2) g^2 (r^2 - r0^2)^2 (r^2 + A r0^2)
whose minimum sphere sits at r0 = ((2+N)/3)^(1/4).  Boundary conditions are
psi'(0) = 0 and psi(inf) = 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

__all__ = ["ModelParams", "potential", "operator_residual", "exact_ground_state"]

# g=1, A=2 admits the closed-form ground state exp(-r^4/4); match within this.
_EXACT_CASE_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Constants of the N-dimensional sombrero problem.

    ``k`` and ``r0`` are derived, never set by the caller: k = (N-1)/2 may be
    half-integer (even N) and every formula treats it as a plain real; r0
    satisfies r0^4 = (2+N)/3.
    """

    n_dim: int
    g: float
    a_shape: float
    k: float = field(init=False)
    r0: float = field(init=False)

    def __post_init__(self) -> None:
        if int(self.n_dim) != self.n_dim or self.n_dim < 1:
            raise ValueError(f"n_dim must be an integer >= 1, got {self.n_dim}")
        if not self.g > 0.0:
            raise ValueError(f"coupling g must be > 0, got {self.g}")
        if not self.a_shape > 0.0:
            # A <= 0 makes sqrt(r^2 + A r0^2) ill-defined at small r
            raise ValueError(f"shape constant A must be > 0, got {self.a_shape}")
        object.__setattr__(self, "n_dim", int(self.n_dim))
        object.__setattr__(self, "g", float(self.g))
        object.__setattr__(self, "a_shape", float(self.a_shape))
        object.__setattr__(self, "k", (self.n_dim - 1) / 2.0)
        object.__setattr__(self, "r0", ((2.0 + self.n_dim) / 3.0) ** 0.25)


def potential(r, p: ModelParams):
    """Sombrero well (1/2) g^2 (r^2 - r0^2)^2 (r^2 + A r0^2); >= 0, zero only at r0."""
    r = np.asarray(r, dtype=float)
    r2 = r * r
    return 0.5 * p.g**2 * (r2 - p.r0**2) ** 2 * (r2 + p.a_shape * p.r0**2)


def operator_residual(
    r: np.ndarray,
    psi: np.ndarray,
    energy: float,
    p: ModelParams,
    potential_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> np.ndarray:
    """Pointwise residual of the radial eigenvalue equation, as a test probe.

    Applies  -1/2 psi'' - (k/r) psi' + V psi - E psi  with 3-point stencils
    (spacing-aware, so non-uniform grids work).  Entries that lack a full
    stencil are returned as NaN.  If the grid starts exactly at r = 0, the
    first entry is evaluated there using the even reflection psi'(0) = 0,
    under which (k/r) psi' -> k psi''(0).

    ``potential_fn`` substitutes the potential (e.g. a harmonic stub); the
    model potential is used when omitted.
    """
    r = np.asarray(r, dtype=float)
    psi = np.asarray(psi, dtype=float)
    if r.ndim != 1 or r.shape != psi.shape:
        raise ValueError("r and psi must be 1-d arrays of equal length")
    if len(r) < 5:
        raise ValueError(f"grid too short for a residual probe: {len(r)} points")
    if np.any(np.diff(r) <= 0):
        raise ValueError("grid must be strictly increasing")

    vfun = potential_fn if potential_fn is not None else (lambda x: potential(x, p))
    out = np.full_like(psi, np.nan)

    h1 = r[1:-1] - r[:-2]
    h2 = r[2:] - r[1:-1]
    y0, y1, y2 = psi[:-2], psi[1:-1], psi[2:]
    d1 = (-h2 / (h1 * (h1 + h2))) * y0 + ((h2 - h1) / (h1 * h2)) * y1 + (
        h1 / (h2 * (h1 + h2))
    ) * y2
    d2 = 2.0 * (y0 / (h1 * (h1 + h2)) - y1 / (h1 * h2) + y2 / (h2 * (h1 + h2)))
    rc = r[1:-1]
    out[1:-1] = -0.5 * d2 - (p.k / rc) * d1 + (vfun(rc) - energy) * y1

    if r[0] == 0.0:
        # even reflection: psi''(0) from the one-sided second difference,
        # (k/r) psi' -> k psi''(0)
        h = r[1]
        d2_0 = 2.0 * (psi[1] - psi[0]) / (h * h)
        out[0] = -(0.5 + p.k) * d2_0 + (float(vfun(np.array([0.0]))[0]) - energy) * psi[0]
    return out


def exact_ground_state(p: ModelParams) -> Optional[Tuple[Callable, float]]:
    """Closed-form ground state, available only at g=1, A=2 (any N).

    There psi(r) = exp(-r^4/4) solves the radial equation with E = r0^6
    because the r^2 terms cancel exactly when r0^4 = (2+N)/3.  Returns
    (wavefunction, energy) in that case, None otherwise.
    """
    if abs(p.g - 1.0) > _EXACT_CASE_TOL or abs(p.a_shape - 2.0) > _EXACT_CASE_TOL:
        return None

    def psi(r):
        r = np.asarray(r, dtype=float)
        return np.exp(-(r**4) / 4.0)

    return psi, p.r0**6
