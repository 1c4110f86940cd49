"""Selects the GJK kernel implementation at import time.

The compiled Cython kernel is preferred; the pure-Python twin is the
fallback. ``HULLMPC_BACKEND=pure`` or ``=compiled`` forces a choice
(forcing ``compiled`` raises if the extension is missing).
"""
import os

from . import _kernel_py

_requested = os.environ.get("HULLMPC_BACKEND", "").strip().lower()

if _requested == "pure":
    _impl = _kernel_py
elif _requested == "compiled":
    from . import _kernel as _impl  # noqa: F401  (ImportError is intentional)
else:
    try:
        from . import _kernel as _impl
    except ImportError:
        _impl = _kernel_py

BACKEND_NAME = "pure" if _impl is _kernel_py else "compiled"

gjk_pair = _impl.gjk_pair
STATUS_DISJOINT = _kernel_py.STATUS_DISJOINT
STATUS_COLLISION = _kernel_py.STATUS_COLLISION
STATUS_NO_CONVERGENCE = _kernel_py.STATUS_NO_CONVERGENCE
