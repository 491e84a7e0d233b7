"""Backend selection for the hot kernels.

The compiled extension is used when importable; setting
``KHCOB_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

from . import _kernels_py

_compiled = None
if not os.environ.get("KHCOB_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _kernels_py


def resolve_mask(n_members, a_pairs, b_pairs, mask):
    return _impl.resolve_mask(n_members, a_pairs, b_pairs, mask)


def all_resolutions(n_members, a_pairs, b_pairs):
    return _impl.all_resolutions(n_members, a_pairs, b_pairs)


def smith_reduce(a):
    if _compiled is not None:
        try:
            return _compiled.smith_reduce(a)
        except OverflowError:
            pass
    return _kernels_py.smith_reduce(a)
