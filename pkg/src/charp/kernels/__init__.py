"""Hot loops with a compiled path and a pure-numpy fallback.

``CHARP_BACKEND=numpy`` forces the fallback; the default is numba when
it imports.
"""

import os
from types import ModuleType

from . import _numpy

try:
    from . import _numba
except ImportError:  # pragma: no cover - numba missing
    _numba = None

BACKENDS = ("numba", "numpy")


def get_backend(name: str | None = None) -> ModuleType:
    name = name or os.environ.get("CHARP_BACKEND", "numba")
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}, choose from {BACKENDS}")
    if name == "numba" and _numba is not None:
        return _numba
    return _numpy


def backend_name(module: ModuleType) -> str:
    return "numba" if module is _numba and _numba is not None else "numpy"
