"""Kernel backend chosen at import: the Cython extension when it is built
and ``POSETMAP_PURE`` is unset, otherwise the pure-Python fallback."""
import os

from . import _kernels_py

try:
    if os.environ.get("POSETMAP_PURE"):
        raise ImportError("pure backend requested")
    from . import _kernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _kernels_py
    BACKEND = "python"

monotone_violation = _impl.monotone_violation
bellman_ford = _impl.bellman_ford
