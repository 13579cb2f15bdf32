"""Hot-kernel dispatch: compiled extension when available, NumPy fallback otherwise.

The three kernels (Sturm pivot counting, pivoted tridiagonal solves, and the
nested double-integral sweep of the iteration) are sequential scans that
NumPy cannot express as array operations.  A Cython extension implements
them natively; `_pure` holds the reference implementations.  Selection
happens once at import; set SOMBRERO_PURE=1 to force the fallback (used by
the benchmark and the cross-checking tests).
"""
from __future__ import annotations

import os

from . import _pure

if os.environ.get("SOMBRERO_PURE", "").strip() not in ("", "0"):
    _impl = _pure
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pure

BACKEND: str = _impl.BACKEND
sturm_count = _impl.sturm_count
tridiag_solve = _impl.tridiag_solve
nested_update = _impl.nested_update

__all__ = ["BACKEND", "sturm_count", "tridiag_solve", "nested_update"]
