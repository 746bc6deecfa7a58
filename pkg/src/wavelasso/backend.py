"""Kernel backend selection.

The hot numerical kernels exist twice: a Cython extension
(``wavelasso._core``) and a pure-numpy fallback (``wavelasso._kernels_py``).
The compiled one is preferred when importable.  Set ``WAVELASSO_BACKEND`` to
``python`` or ``compiled`` to force a choice (``compiled`` raises if the
extension is missing).  ``bench kernels`` times both side by side.
"""

import os

from . import _kernels_py

_requested = os.environ.get("WAVELASSO_BACKEND", "").strip().lower()

if _requested == "python":
    kernels = _kernels_py
    COMPILED = False
else:
    try:
        from . import _core as kernels  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        if _requested == "compiled":
            raise
        kernels = _kernels_py
        COMPILED = False

BACKEND = "compiled" if COMPILED else "python"


def get_kernels(name=None):
    """Return a kernel module by name ("python", "compiled", or None=active)."""
    if name is None:
        return kernels
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _core

        return _core
    raise ValueError(f"unknown backend {name!r}")


def available_backends():
    names = ["python"]
    try:
        from . import _core  # noqa: F401

        names.append("compiled")
    except ImportError:
        pass
    return names
