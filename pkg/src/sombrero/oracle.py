"""Independent finite-difference ground-state solver, for cross-validation.

For odd N (integer k) the problem is reduced by u = r^k psi to

    -1/2 u'' + [V(r) + k(k-1)/(2 r^2)] u = E u,

a symmetric tridiagonal eigenproblem on a uniform mesh with Dirichlet ends
(for N = 1 a Neumann row at the origin, symmetrized by scaling the first
component).  For even N the reduced u ~ sqrt(r) is singular at the origin and
second-order convergence is lost, so a flux-form discretization of the
weighted operator -(1/2 r^{2k}) d/dr r^{2k} d/dr is used instead, on cells
centred at (i-1/2)h with faces at ih: the r = 0 face carries zero measure
(natural reflecting boundary) and the scheme is symmetrized by the cell
masses.  In the eigenvector convention of this module u always stands for
r^k psi at the stored radii, whichever scheme produced it.

The smallest eigenvalue comes from bisection on the Sturm pivot count and the
vector from shifted inverse iteration; both scans live in the kernels module.
Nothing here shares code with the trial-function iteration, which is the
point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from . import kernels
from .model import ModelParams, potential

__all__ = [
    "DiscreteHamiltonian",
    "build_hamiltonian",
    "ground_energy",
    "ground_state",
    "psi_from_u",
    "ground_energy_richardson",
]

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class DiscreteHamiltonian:
    """Symmetric tridiagonal discretization of the radial operator.

    ``scheme`` is "reduced" (u = r^k psi on nodes ih) or "flux" (weighted
    flux form on cell centres, even N).  ``to_u`` converts the raw symmetric
    eigenvector into u = r^k psi at the stored radii.
    """

    step: float
    k: float
    r: np.ndarray
    diag: np.ndarray
    offdiag: np.ndarray
    scheme: str
    neumann: bool = False  # N = 1 only: origin node with reflected stencil
    cell_mass: Optional[np.ndarray] = None  # flux scheme: integral of r^{2k}/h per cell

    @property
    def size(self) -> int:
        return len(self.diag)

    def to_u(self, vec: np.ndarray) -> np.ndarray:
        if self.scheme == "flux":
            # symmetrized component is psi*sqrt(mass); u = r^k psi
            return vec * self.r**self.k / np.sqrt(self.cell_mass)
        if self.neumann:
            out = vec.copy()
            out[0] *= _SQRT2
            return out
        return vec.copy()


def build_hamiltonian(
    p: ModelParams,
    step: float,
    r_max: float,
    potential_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> DiscreteHamiltonian:
    if step > 0.01:
        raise ValueError(f"step {step} too coarse for the probe (need <= 0.01)")
    vfun = potential_fn if potential_fn is not None else (lambda x: potential(x, p))
    n_cells = int(round(r_max / step))
    if n_cells < 12:
        raise ValueError("r_max / step leaves too few nodes")
    inv_h2 = 1.0 / (step * step)

    if p.k == 0.0:
        r = np.arange(0, n_cells) * step
        diag = inv_h2 + np.asarray(vfun(r), dtype=float)
        offdiag = np.full(len(r) - 1, -0.5 * inv_h2)
        offdiag[0] = -inv_h2 / _SQRT2  # symmetrized Neumann coupling
        return DiscreteHamiltonian(
            step=step, k=p.k, r=r, diag=diag, offdiag=offdiag, scheme="reduced",
            neumann=True,
        )

    if p.k == round(p.k):  # odd N: u = r^k psi is smooth, plain reduction
        r = np.arange(1, n_cells) * step
        diag = (
            inv_h2
            + np.asarray(vfun(r), dtype=float)
            + p.k * (p.k - 1.0) / (2.0 * r * r)
        )
        offdiag = np.full(len(r) - 1, -0.5 * inv_h2)
        return DiscreteHamiltonian(
            step=step, k=p.k, r=r, diag=diag, offdiag=offdiag, scheme="reduced"
        )

    # even N: flux form on staggered cells
    k2 = 2.0 * p.k
    centers = (np.arange(1, n_cells + 1) - 0.5) * step
    faces = np.arange(0, n_cells + 1) * step
    w_face = faces**k2
    mass = (faces[1:] ** (k2 + 1.0) - faces[:-1] ** (k2 + 1.0)) / ((k2 + 1.0) * step)
    diag = (w_face[1:] + w_face[:-1]) / (2.0 * mass) * inv_h2 + np.asarray(
        vfun(centers), dtype=float
    )
    offdiag = -w_face[1:-1] * inv_h2 / (2.0 * np.sqrt(mass[:-1] * mass[1:]))
    return DiscreteHamiltonian(
        step=step,
        k=p.k,
        r=centers,
        diag=diag,
        offdiag=offdiag,
        scheme="flux",
        cell_mass=mass,
    )


def _smallest_eigenvalue(ham: DiscreteHamiltonian) -> float:
    d = np.ascontiguousarray(ham.diag)
    e2 = np.ascontiguousarray(ham.offdiag**2)
    abs_e = np.abs(ham.offdiag)
    pad = np.concatenate([[0.0], abs_e, [0.0]])
    lo = float(np.min(ham.diag - pad[:-1] - pad[1:]))  # Gershgorin lower bound
    hi = float(np.min(ham.diag))  # min-max bound: lambda_min <= min diagonal
    if kernels.sturm_count(d, e2, hi) < 1:
        raise RuntimeError("bisection bracket failed to contain an eigenvalue")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if kernels.sturm_count(d, e2, mid) >= 1:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-14 * max(1.0, abs(hi)):
            break
    return hi


def _ground_vector(ham: DiscreteHamiltonian, lam: float) -> np.ndarray:
    d = np.ascontiguousarray(ham.diag)
    e = np.ascontiguousarray(ham.offdiag)
    shift = lam - 1e-10 * max(1.0, abs(lam))
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(ham.size)
    v /= np.linalg.norm(v)
    for _ in range(4):
        v = kernels.tridiag_solve(d, e, shift, np.ascontiguousarray(v))
        norm = np.linalg.norm(v)
        if not np.isfinite(norm) or norm == 0.0:
            raise RuntimeError("inverse iteration stagnated")
        v /= norm
    if v[np.argmax(np.abs(v))] < 0.0:
        v = -v
    return v


def ground_energy(
    p: ModelParams,
    step: float,
    r_max: float,
    potential_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> Tuple[float, np.ndarray]:
    """Smallest eigenvalue and its eigenvector as u = r^k psi samples.

    The radii the samples live on are those of
    ``build_hamiltonian(p, step, r_max, ...).r``.
    """
    ham = build_hamiltonian(p, step, r_max, potential_fn)
    lam = _smallest_eigenvalue(ham)
    vec = _ground_vector(ham, lam)
    return lam, ham.to_u(vec)


def psi_from_u(u: np.ndarray, r: np.ndarray, p: ModelParams) -> np.ndarray:
    """Undo the u = r^k psi reduction and normalize psi(0) = 1.

    The ground vector must be nodeless; a sign change above the roundoff
    floor of the inverse iteration means an excited state came back and is
    reported as an error.
    """
    u = np.asarray(u, dtype=float)
    r = np.asarray(r, dtype=float)
    floor = 1e-12 * float(np.max(np.abs(u)))
    body = u[np.abs(u) > floor]
    if np.any(body < 0.0):
        raise ValueError("eigenvector changes sign; not a ground state")
    if p.k == 0.0:
        psi = u.copy()
        psi0 = psi[0] if r[0] == 0.0 else _quad_extrap_zero(r, psi)
    else:
        psi = u / r**p.k
        psi0 = _quad_extrap_zero(r, psi)
    return psi / psi0


def ground_state(
    p: ModelParams,
    step: float,
    r_max: float,
    potential_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> Tuple[float, np.ndarray, np.ndarray]:
    """Convenience wrapper: (energy, radii, psi normalized to psi(0)=1)."""
    ham = build_hamiltonian(p, step, r_max, potential_fn)
    lam = _smallest_eigenvalue(ham)
    u = ham.to_u(_ground_vector(ham, lam))
    return lam, ham.r, psi_from_u(u, ham.r, p)


def _quad_extrap_zero(r: np.ndarray, v: np.ndarray) -> float:
    x = r[:3] ** 2
    y = v[:3]
    l0 = (x[1] * x[2]) / ((x[0] - x[1]) * (x[0] - x[2]))
    l1 = (x[0] * x[2]) / ((x[1] - x[0]) * (x[1] - x[2]))
    l2 = (x[0] * x[1]) / ((x[2] - x[0]) * (x[2] - x[1]))
    return float(y[0] * l0 + y[1] * l1 + y[2] * l2)


def ground_energy_richardson(
    p: ModelParams,
    base_step: float = 0.01,
    r_max: float = 8.0,
    levels: int = 3,
    potential_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> Tuple[float, List[float]]:
    """Step-halving ladder with h^2 extrapolation of the last pair.

    Returns (extrapolated energy, raw energies per level).  Successive
    differences shrinking by ~4 per halving confirm the second-order
    convergence of the discretization.
    """
    if levels < 2:
        raise ValueError("need at least two levels to extrapolate")
    raw = []
    for lvl in range(levels):
        lam, _ = ground_energy(p, base_step / 2**lvl, r_max, potential_fn)
        raw.append(lam)
    extrap = (4.0 * raw[-1] - raw[-2]) / 3.0
    return extrap, raw
