"""Hot numeric loops with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and the environment
variable ``LAURENTLAB_DISABLE_NUMBA`` is unset (or ``0``). Both backends
stay importable so they can be compared directly::

    from laurentlab._kernels import numpy_backend, numba_backend
"""
from __future__ import annotations

import os

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba_backend = None


def _wants_numba() -> bool:
    flag = os.environ.get("LAURENTLAB_DISABLE_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


USING_NUMBA = numba_backend is not None and _wants_numba()
active = numba_backend if USING_NUMBA else numpy_backend
BACKEND_NAME = "numba" if USING_NUMBA else "numpy"

fejer_factor = active.fejer_factor
circular_convolve = active.circular_convolve
series_shells = active.series_shells
polytope_slack = active.polytope_slack
monotone_chain = active.monotone_chain
edge_quadrature = active.edge_quadrature

__all__ = [
    "BACKEND_NAME",
    "USING_NUMBA",
    "circular_convolve",
    "edge_quadrature",
    "fejer_factor",
    "monotone_chain",
    "numba_backend",
    "numpy_backend",
    "polytope_slack",
    "series_shells",
]
