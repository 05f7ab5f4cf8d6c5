"""Kernel backend selection.

The compiled extension is used when it imports cleanly; setting
``PSIONTIC_PURE_PYTHON=1`` forces the numpy fallback.
"""
import importlib
import os

from . import _kernels_py

AVAILABLE = {"python": _kernels_py}
try:
    AVAILABLE["cython"] = importlib.import_module("psiontic._kernels")
except ImportError:
    pass

if os.environ.get("PSIONTIC_PURE_PYTHON") or "cython" not in AVAILABLE:
    BACKEND = "python"
else:
    BACKEND = "cython"

kernels = AVAILABLE[BACKEND]


def use_backend(name):
    """Switch the active kernel module; returns the previous backend name."""
    global kernels, BACKEND
    if name not in AVAILABLE:
        raise ValueError(f"backend {name!r} not available (have {sorted(AVAILABLE)})")
    previous = BACKEND
    BACKEND, kernels = name, AVAILABLE[name]
    return previous
