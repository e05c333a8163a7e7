"""Hot hull kernels with a compiled backend and a pure-Python fallback.

The compiled Cython module is used when it was built and imports cleanly;
setting ``SPINDLE_PURE_PYTHON=1`` forces the fallback.  Both backends expose
``linear_hull``, ``prune_r_hull`` and ``spindle_contains_xy`` with identical
results.
"""
import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("SPINDLE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND_NAME = "cython" if compiled_backend is not None else "python"

linear_hull = backend.linear_hull
prune_r_hull = backend.prune_r_hull
spindle_contains_xy = backend.spindle_contains_xy

__all__ = ["BACKEND_NAME", "backend", "compiled_backend", "python_backend",
           "linear_hull", "prune_r_hull", "spindle_contains_xy"]
