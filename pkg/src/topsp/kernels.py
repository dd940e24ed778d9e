"""Backend selection for the numerical hot loops.

The compiled Cython module is used when it imports; otherwise the
pure-Python implementations take over. Setting ``TOPSP_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("TOPSP_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

jacobi_eigh = _impl.jacobi_eigh
cyclic_convolve = _impl.cyclic_convolve


def get_backend(name=None):
    """Return the kernel module for ``name`` ("cython" or "python").

    ``None`` gives the active backend. Raises ImportError if the compiled
    backend is requested but unavailable.
    """
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")
