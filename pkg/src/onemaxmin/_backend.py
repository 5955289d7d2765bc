"""Kernel backend selection.

The compiled extension is used when it imports; ``ONEMAXMIN_PURE_PYTHON=1``
forces the pure-Python fallback. Both expose the same functions.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and os.environ.get("ONEMAXMIN_PURE_PYTHON", "") not in ("1", "true", "yes"):
    kernels: ModuleType = _compiled
    BACKEND = "compiled"
else:
    kernels = _pykernels
    BACKEND = "python"


def available() -> list[str]:
    return ["compiled", "python"] if _compiled is not None else ["python"]


def get(name: str | None = None) -> ModuleType:
    """Kernel module by name; ``None`` gives the default selected at import."""
    if name is None:
        return kernels
    if name == "python":
        return _pykernels
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("the compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
