"""Backend selection for the sweep kernel.

The compiled extension ``opradius._kernels`` is used when it imports;
otherwise the numpy implementation in ``opradius._kernels_py`` takes over.
Set ``OPRADIUS_PURE_PYTHON=1`` to force the fallback.  The compiled kernel
covers ``n <= 2``; larger sizes always take the batched numpy path.
"""
import os

from . import _kernels_py

top_eig_python = _kernels_py.top_eig

try:
    if os.environ.get("OPRADIUS_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure python backend forced")
    from ._kernels import top_eig as _compiled_small
except ImportError:
    _compiled_small = None


def _top_eig_dispatch(basis, member, dirs):
    if basis.shape[-1] <= 2:
        return _compiled_small(basis, member, dirs)
    return top_eig_python(basis, member, dirs)


top_eig_compiled = _top_eig_dispatch if _compiled_small is not None else None

BACKEND = "compiled" if top_eig_compiled is not None else "python"
top_eig = top_eig_compiled if top_eig_compiled is not None else top_eig_python

__all__ = ["BACKEND", "top_eig", "top_eig_python", "top_eig_compiled"]
