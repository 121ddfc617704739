"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise, or
when the ``SCRATCHLINT_PURE_PYTHON`` environment variable is set to a
non-empty value other than ``0``, the pure-Python ``_pykernels`` module is used.
Both expose ``solve_must`` and ``diagonal_runs`` with identical results.
"""

from __future__ import annotations

import os
from array import array

from . import _pykernels

python_backend = _pykernels

if os.environ.get("SCRATCHLINT_PURE_PYTHON", "") not in ("", "0"):
    compiled_backend = None
else:
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

backend = compiled_backend or python_backend
BACKEND_NAME = "cython" if compiled_backend is not None else "python"


def int_array(values) -> array:
    return array("i", values)


def index_array(values) -> array:
    return array("q", values)


def solve_must(*args, impl=None):
    return (impl or backend).solve_must(*args)


def diagonal_runs(a, b, weight, same, min_weight, impl=None):
    return (impl or backend).diagonal_runs(a, b, weight, same, min_weight)
