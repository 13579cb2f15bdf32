"""Pure NumPy/Python implementations of the hot kernels.

Same algorithms as the compiled core, loop-for-loop; the compiled module is
preferred at import time when present.  These are the reference
implementations the extension is tested against.
"""
from __future__ import annotations

import math
from typing import Tuple

import numpy as np

BACKEND = "pure"


def sturm_count(diag: np.ndarray, off2: np.ndarray, x: float) -> int:
    """Number of eigenvalues of the symmetric tridiagonal matrix below x.

    Standard pivoted recurrence q_i = d_i - x - e_{i-1}^2 / q_{i-1}; the count
    of negative pivots is the count of eigenvalues < x.  ``off2`` holds the
    squared off-diagonal entries.  Pivots below the underflow-safe floor are
    clamped to -pivmin so the division can neither overflow nor divide by
    zero.
    """
    pivmin = 2.2250738585072014e-308 * max(1.0, float(np.max(off2)) if len(off2) else 1.0)
    count = 0
    q = diag[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, len(diag)):
        q = diag[i] - x - off2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def tridiag_solve(
    diag: np.ndarray, off: np.ndarray, shift: float, rhs: np.ndarray
) -> np.ndarray:
    """Solve (T - shift*I) x = rhs for symmetric tridiagonal T, with pivoting.

    Plain Thomas elimination breaks down near an eigenvalue, which is exactly
    where inverse iteration operates, so rows are swapped when the pivot is
    smaller than the subdiagonal (LU with partial pivoting specialised to the
    tridiagonal band; a second superdiagonal appears on swapped rows).
    """
    n = len(diag)
    dd = np.asarray(diag, dtype=float) - shift
    cc = np.zeros(n)
    cc[: n - 1] = off
    c2 = np.zeros(n)
    x = np.asarray(rhs, dtype=float).copy()
    for i in range(n - 1):
        sub = off[i]
        if abs(dd[i]) >= abs(sub):
            piv = dd[i]
            if piv == 0.0:
                piv = dd[i] = 1e-300
            m_ = sub / piv
            dd[i + 1] -= m_ * cc[i]
            cc[i + 1] -= m_ * c2[i]
            x[i + 1] -= m_ * x[i]
        else:
            m_ = dd[i] / sub
            di1, ci1 = dd[i + 1], cc[i + 1]
            dd[i] = sub
            new_c, new_c2 = di1, ci1
            dd[i + 1] = cc[i] - m_ * di1
            cc[i + 1] = c2[i] - m_ * ci1
            cc[i], c2[i] = new_c, new_c2
            x[i], x[i + 1] = x[i + 1], x[i] - m_ * x[i + 1]
    if dd[n - 1] == 0.0:
        dd[n - 1] = 1e-300
    x[n - 1] /= dd[n - 1]
    if n >= 2:
        x[n - 2] = (x[n - 2] - cc[n - 2] * x[n - 1]) / dd[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - cc[i] * x[i + 1] - c2[i] * x[i + 2]) / dd[i]
    return x


def nested_update(
    logw: np.ndarray,
    s: np.ndarray,
    half_widths: np.ndarray,
    order: int,
    K: np.ndarray,
    Kfull: np.ndarray,
    anchor_right: bool,
) -> Tuple[np.ndarray, np.ndarray]:
    """One sweep of the nested double integral driving the iteration.

    Computes, node by node,

        f(y) = 1 - 2 * int_rc^y dy' e^{-logw(y')} int_rc^{y'} e^{logw(x)} s(x) dx

    together with its derivative f'(y) (the outer integrand), where rc is the
    right edge for ``anchor_right`` and the origin otherwise.  Inner
    antiderivatives are evaluated per panel through the Legendre integration
    operator ``K`` with a panel-local max-shift of logw; running cross-panel
    sums carry their own scale so nothing overflows even when logw spans
    hundreds of decades.  For the left anchor, nodes beyond the peak of logw
    use the right-anchored form of the inner integral (the two agree because
    the full weighted integral of s vanishes by construction of the energy
    shift), which avoids dividing a roundoff-sized difference by a huge
    weight.
    """
    n = len(logw)
    n_panels = n // order
    f = np.empty(n)
    fp = np.empty(n)
    outer = np.empty(n)

    if anchor_right:
        mant, scale = 0.0, -math.inf
        for pnl in range(n_panels - 1, -1, -1):
            sl = slice(pnl * order, (pnl + 1) * order)
            lw = logw[sl]
            mp = float(lw.max())
            q = np.exp(lw - mp) * s[sl]
            cum = half_widths[pnl] * (K @ q)
            full = half_widths[pnl] * float(Kfull @ q)
            new_scale = max(mp, scale)
            # -I(y) = (full - cum) e^{mp} + tail
            neg_i = (full - cum) * math.exp(mp - new_scale) + mant * math.exp(
                scale - new_scale
            )
            outer[sl] = 2.0 * neg_i * np.exp(new_scale - lw)
            mant = mant * math.exp(scale - new_scale) + full * math.exp(mp - new_scale)
            scale = new_scale
        run = 0.0
        for pnl in range(n_panels - 1, -1, -1):
            sl = slice(pnl * order, (pnl + 1) * order)
            o = outer[sl]
            cum = half_widths[pnl] * (K @ o)
            full = half_widths[pnl] * float(Kfull @ o)
            f[sl] = 1.0 - ((full - cum) + run)
            fp[sl] = o
            run += full
    else:
        peak_panel = int(np.argmax(logw)) // order
        mant, scale = 0.0, -math.inf
        for pnl in range(peak_panel + 1):
            sl = slice(pnl * order, (pnl + 1) * order)
            lw = logw[sl]
            mp = float(lw.max())
            q = np.exp(lw - mp) * s[sl]
            cum = half_widths[pnl] * (K @ q)
            full = half_widths[pnl] * float(Kfull @ q)
            new_scale = max(mp, scale)
            # I(y) = cum e^{mp} + leading
            i_val = cum * math.exp(mp - new_scale) + mant * math.exp(scale - new_scale)
            outer[sl] = -2.0 * i_val * np.exp(new_scale - lw)
            mant = mant * math.exp(scale - new_scale) + full * math.exp(mp - new_scale)
            scale = new_scale
        mant, scale = 0.0, -math.inf
        for pnl in range(n_panels - 1, peak_panel, -1):
            sl = slice(pnl * order, (pnl + 1) * order)
            lw = logw[sl]
            mp = float(lw.max())
            q = np.exp(lw - mp) * s[sl]
            cum = half_widths[pnl] * (K @ q)
            full = half_widths[pnl] * float(Kfull @ q)
            new_scale = max(mp, scale)
            # I(y) = -int_y^rmax q = -((full - cum) e^{mp} + tail)
            i_val = -(
                (full - cum) * math.exp(mp - new_scale)
                + mant * math.exp(scale - new_scale)
            )
            outer[sl] = -2.0 * i_val * np.exp(new_scale - lw)
            mant = mant * math.exp(scale - new_scale) + full * math.exp(mp - new_scale)
            scale = new_scale
        run = 0.0
        for pnl in range(n_panels):
            sl = slice(pnl * order, (pnl + 1) * order)
            o = outer[sl]
            cum = half_widths[pnl] * (K @ o)
            full = half_widths[pnl] * float(Kfull @ o)
            f[sl] = 1.0 + run + cum
            fp[sl] = o
            run += full
    return f, fp
