"""Hot-kernel backend selection.

The compiled extension (_ckern, built from _ckern.pyx when Cython and a C
compiler are present) and the numpy module (_kernels_py) expose the same
functions.  Import-time policy:

    DUNKLRIESZ_BACKEND=compiled   require the extension, fail loudly
    DUNKLRIESZ_BACKEND=python     force the numpy fallback
    unset / auto                  compiled if importable, else numpy
"""

from __future__ import annotations

import os

from . import _kernels_py

_choice = os.environ.get("DUNKLRIESZ_BACKEND", "auto").lower()

if _choice == "python":
    _impl = _kernels_py
elif _choice == "compiled":
    from . import _ckern as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _ckern as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND_NAME = _impl.BACKEND_NAME
SandwichViolation = _kernels_py.SandwichViolation

kernel_many_x = _impl.kernel_many_x
kernel_many_y = _impl.kernel_many_y


def available_backends():
    names = ["python"]
    try:
        from . import _ckern  # noqa: F401
        names.append("compiled")
    except ImportError:
        pass
    return names


def get_impl(name: str):
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _ckern
        return _ckern
    raise ValueError(f"unknown backend {name!r}")
