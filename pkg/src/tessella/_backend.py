"""Select the compiled coset-table kernels when available.

Set ``TESSELLA_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
kernels = _kernels_py

if not os.environ.get("TESSELLA_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        kernels = _compiled
        BACKEND = "cython"


def use(name: str) -> None:
    """Switch backend at runtime (``"python"`` or ``"cython"``); benchmarks use this."""
    global kernels, BACKEND
    if name == "python":
        kernels, BACKEND = _kernels_py, "python"
    elif name == "cython":
        from . import _kernels as _compiled  # type: ignore[attr-defined]

        kernels, BACKEND = _compiled, "cython"
    else:
        raise ValueError(f"unknown backend {name!r}")
