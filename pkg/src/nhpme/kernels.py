"""Backend selection for the time-stepping kernels.

The compiled extension is used when it imports; otherwise, or when
``NHPME_PURE_PYTHON`` is set to a non-empty value other than ``0``, the
numpy fallback is used.  Both expose ``cfl_dt``, ``step`` and ``evolve``.
"""

import os

from . import _kernels_py

OK, NEGATIVE, NONFINITE, MAX_STEPS = 0, 1, 2, 3


def _want_python():
    return os.environ.get("NHPME_PURE_PYTHON", "") not in ("", "0")


try:
    if _want_python():
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

backend = _compiled if _compiled is not None else _kernels_py
BACKEND_NAME = "cython" if _compiled is not None else "python"


def get_backend(name=None):
    """Return a kernel module by name (``"cython"`` or ``"python"``), or the active one."""
    if name is None:
        return backend
    if name == "python":
        return _kernels_py
    if name == "cython":
        if _compiled is None:
            try:
                from . import _kernels
            except ImportError as exc:
                raise RuntimeError("compiled kernels are not built") from exc
            return _kernels
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
