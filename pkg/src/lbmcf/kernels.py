"""Kernel backend selection.

The compiled extension is preferred; the numpy implementation is the
fallback. Set LBMCF_PURE_PYTHON=1 to force the fallback (used by tests and
the kernel benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("LBMCF_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND_NAME
bellman_ford_table = _impl.bellman_ford_table
