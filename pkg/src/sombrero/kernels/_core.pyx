# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: same algorithms as ``_pure``, typed loops."""
import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, INFINITY

cnp.import_array()

BACKEND = "compiled"


def sturm_count(double[::1] diag, double[::1] off2, double x):
    """Number of eigenvalues of the symmetric tridiagonal matrix below x."""
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t i
    cdef int count = 0
    cdef double pivmin = 1.0
    for i in range(n - 1):
        if off2[i] > pivmin:
            pivmin = off2[i]
    pivmin *= 2.2250738585072014e-308
    cdef double q = diag[0] - x
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = diag[i] - x - off2[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def tridiag_solve(double[::1] diag, double[::1] off, double shift, double[::1] rhs):
    """Solve (T - shift*I) x = rhs, LU with partial pivoting on the band."""
    cdef Py_ssize_t n = diag.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dd_a = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cc_a = np.zeros(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c2_a = np.zeros(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x_a = np.empty(n)
    cdef double[::1] dd = dd_a
    cdef double[::1] cc = cc_a
    cdef double[::1] c2 = c2_a
    cdef double[::1] x = x_a
    cdef Py_ssize_t i
    cdef double sub, piv, m_, di1, ci1, tmp
    for i in range(n):
        dd[i] = diag[i] - shift
        x[i] = rhs[i]
    for i in range(n - 1):
        cc[i] = off[i]
    for i in range(n - 1):
        sub = off[i]
        if fabs(dd[i]) >= fabs(sub):
            piv = dd[i]
            if piv == 0.0:
                piv = 1e-300
                dd[i] = piv
            m_ = sub / piv
            dd[i + 1] -= m_ * cc[i]
            cc[i + 1] -= m_ * c2[i]
            x[i + 1] -= m_ * x[i]
        else:
            m_ = dd[i] / sub
            di1 = dd[i + 1]
            ci1 = cc[i + 1]
            dd[i] = sub
            dd[i + 1] = cc[i] - m_ * di1
            cc[i + 1] = c2[i] - m_ * ci1
            cc[i] = di1
            c2[i] = ci1
            tmp = x[i]
            x[i] = x[i + 1]
            x[i + 1] = tmp - m_ * x[i + 1]
    if dd[n - 1] == 0.0:
        dd[n - 1] = 1e-300
    x[n - 1] /= dd[n - 1]
    if n >= 2:
        x[n - 2] = (x[n - 2] - cc[n - 2] * x[n - 1]) / dd[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - cc[i] * x[i + 1] - c2[i] * x[i + 2]) / dd[i]
    return x_a


cdef inline void _panel_anti(
    double[:, ::1] K, double[::1] Kfull, double* q, double half,
    double* cum, double* full, Py_ssize_t m,
) noexcept nogil:
    """cum = half * K @ q (antiderivative at nodes), full = half * Kfull @ q."""
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(m):
        acc = 0.0
        for j in range(m):
            acc += K[i, j] * q[j]
        cum[i] = half * acc
    acc = 0.0
    for j in range(m):
        acc += Kfull[j] * q[j]
    full[0] = half * acc


def nested_update(
    double[::1] logw,
    double[::1] s,
    double[::1] half_widths,
    int order,
    double[:, ::1] K,
    double[::1] Kfull,
    bint anchor_right,
):
    """One sweep of the nested double integral; see the pure version for the math."""
    cdef Py_ssize_t n = logw.shape[0]
    cdef Py_ssize_t n_panels = n // order
    cdef Py_ssize_t m = order
    cdef cnp.ndarray[cnp.float64_t, ndim=1] f_a = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fp_a = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] outer_a = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf_a = np.empty(3 * m)
    cdef double[::1] f = f_a
    cdef double[::1] fp = fp_a
    cdef double[::1] outer = outer_a
    cdef double[::1] buf = buf_a
    cdef double* q
    cdef double* cum
    cdef double mant, scale, new_scale, mp, full, run, i_val
    cdef Py_ssize_t pnl, i, base, peak, peak_panel

    q = &buf[0]
    cum = &buf[m]

    if anchor_right:
        mant = 0.0
        scale = -INFINITY
        for pnl in range(n_panels - 1, -1, -1):
            base = pnl * m
            mp = logw[base]
            for i in range(1, m):
                if logw[base + i] > mp:
                    mp = logw[base + i]
            for i in range(m):
                q[i] = exp(logw[base + i] - mp) * s[base + i]
            _panel_anti(K, Kfull, q, half_widths[pnl], cum, &full, m)
            new_scale = mp if mp > scale else scale
            for i in range(m):
                i_val = (full - cum[i]) * exp(mp - new_scale) + mant * exp(scale - new_scale)
                outer[base + i] = 2.0 * i_val * exp(new_scale - logw[base + i])
            mant = mant * exp(scale - new_scale) + full * exp(mp - new_scale)
            scale = new_scale
        run = 0.0
        for pnl in range(n_panels - 1, -1, -1):
            base = pnl * m
            for i in range(m):
                q[i] = outer[base + i]
            _panel_anti(K, Kfull, q, half_widths[pnl], cum, &full, m)
            for i in range(m):
                f[base + i] = 1.0 - ((full - cum[i]) + run)
                fp[base + i] = outer[base + i]
            run += full
    else:
        peak = 0
        for i in range(1, n):
            if logw[i] > logw[peak]:
                peak = i
        peak_panel = peak // m
        mant = 0.0
        scale = -INFINITY
        for pnl in range(peak_panel + 1):
            base = pnl * m
            mp = logw[base]
            for i in range(1, m):
                if logw[base + i] > mp:
                    mp = logw[base + i]
            for i in range(m):
                q[i] = exp(logw[base + i] - mp) * s[base + i]
            _panel_anti(K, Kfull, q, half_widths[pnl], cum, &full, m)
            new_scale = mp if mp > scale else scale
            for i in range(m):
                i_val = cum[i] * exp(mp - new_scale) + mant * exp(scale - new_scale)
                outer[base + i] = -2.0 * i_val * exp(new_scale - logw[base + i])
            mant = mant * exp(scale - new_scale) + full * exp(mp - new_scale)
            scale = new_scale
        mant = 0.0
        scale = -INFINITY
        for pnl in range(n_panels - 1, peak_panel, -1):
            base = pnl * m
            mp = logw[base]
            for i in range(1, m):
                if logw[base + i] > mp:
                    mp = logw[base + i]
            for i in range(m):
                q[i] = exp(logw[base + i] - mp) * s[base + i]
            _panel_anti(K, Kfull, q, half_widths[pnl], cum, &full, m)
            new_scale = mp if mp > scale else scale
            for i in range(m):
                i_val = -((full - cum[i]) * exp(mp - new_scale) + mant * exp(scale - new_scale))
                outer[base + i] = -2.0 * i_val * exp(new_scale - logw[base + i])
            mant = mant * exp(scale - new_scale) + full * exp(mp - new_scale)
            scale = new_scale
        run = 0.0
        for pnl in range(n_panels):
            base = pnl * m
            for i in range(m):
                q[i] = outer[base + i]
            _panel_anti(K, Kfull, q, half_widths[pnl], cum, &full, m)
            for i in range(m):
                f[base + i] = 1.0 + run + cum[i]
                fp[base + i] = outer[base + i]
            run += full
    return f_a, fp_a
