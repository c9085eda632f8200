"""Backend selection for the tree kernels.

The compiled extension is used when it was built and ``GENMVP_PURE_PYTHON``
is unset; otherwise the numpy implementation in ``_kernels_py`` runs.
Object (Python int) arrays and int64 overflow always go through the numpy
implementation, so results are exact either way.
"""
from __future__ import annotations

import os

import numpy as np

from genmvp import _kernels_py

level_offsets = _kernels_py.level_offsets
exact_sum = _kernels_py.exact_sum

_compiled = None
if not os.environ.get("GENMVP_PURE_PYTHON"):
    try:
        from genmvp import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def laplacian_step(num: np.ndarray, q: int, R: int, backend: str | None = None) -> np.ndarray:
    impl = _pick(backend)
    if impl is not _kernels_py and num.dtype == np.int64:
        try:
            return impl.laplacian_step(num, q, R)
        except OverflowError:
            return _kernels_py.laplacian_step(num.astype(object), q, R)
    return _kernels_py.laplacian_step(num, q, R)


def branch_sums(num: np.ndarray, q: int, R: int, n: int, backend: str | None = None) -> list[int]:
    impl = _pick(backend)
    if impl is not _kernels_py and num.dtype == np.int64:
        return impl.branch_sums(num, q, R, n)
    return _kernels_py.branch_sums(num, q, R, n)


def _pick(backend: str | None):
    if backend is None:
        return _compiled or _kernels_py
    if backend == "python":
        return _kernels_py
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")
