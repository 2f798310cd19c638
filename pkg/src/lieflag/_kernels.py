"""Backend selection for the fundamental-tensor kernels.

The compiled extension is used when it was built; otherwise (or when
``LIEFLAG_PURE_PYTHON=1``) the pure-Python implementation takes over.
Wrappers here normalise inputs to contiguous float64 and outputs to numpy.
"""

import os

import numpy as np

from . import _pykernels

_compiled = None
if os.environ.get("LIEFLAG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKENDS = {"python": _pykernels}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

BACKEND = "compiled" if _compiled is not None else "python"


def _impl(backend):
    return BACKENDS[backend or BACKEND]


def _c(a, ndim):
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"expected {ndim}-d array, got shape {arr.shape}")
    return arr


def norm_value(kind, G, X, y, backend=None):
    return float(_impl(backend).norm_value(kind, _c(G, 2), _c(X, 1), _c(y, 1)))


def fundamental_form(kind, G, X, Y, U, V, backend=None):
    return float(_impl(backend).fundamental_form(kind, _c(G, 2), _c(X, 1), _c(Y, 1), _c(U, 1), _c(V, 1)))


def fundamental_matrix(kind, G, X, Y, backend=None):
    return np.array(_impl(backend).fundamental_matrix(kind, _c(G, 2), _c(X, 1), _c(Y, 1)), dtype=float)


def fundamental_matrices(kind, G, X, Ys, backend=None):
    Ys = _c(Ys, 2)
    if len(Ys) == 0:
        return np.zeros((0, 3, 3))
    return np.array(_impl(backend).fundamental_matrices(kind, _c(G, 2), _c(X, 1), Ys), dtype=float)
