"""Kernel backend selection: compiled extension if built, numpy otherwise.

Set NILPROB_FORCE_PY=1 to force the fallback (used by tests and benchmarks).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("NILPROB_FORCE_PY"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
closure_rows = _impl.closure_rows
element_orders_rows = _impl.element_orders_rows

__all__ = ["BACKEND", "closure_rows", "element_orders_rows"]
