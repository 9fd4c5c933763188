"""Backend selection for the Lindblad kernels.

The compiled extension is used when it imports; otherwise the numpy
implementation.  Setting PTMAGNON_BACKEND=python forces the fallback.
"""
import os

from . import _kernels_py

_forced = os.environ.get("PTMAGNON_BACKEND", "").lower()

if _forced == "python":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        if _forced == "cython":
            raise
        _impl = _kernels_py

BACKEND = _impl.BACKEND
lindblad_rhs = _impl.lindblad_rhs
rk4_propagate = _impl.rk4_propagate
assemble_liouvillian = _impl.assemble_liouvillian

python_backend = _kernels_py


def compiled_backend():
    """The compiled module, or None when it is not built."""
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels
