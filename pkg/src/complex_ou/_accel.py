"""Numba switch.

Set ``COMPLEX_OU_NUMBA=0`` before import to force the pure-numpy kernels.
"""
import os

_flag = os.environ.get("COMPLEX_OU_NUMBA", "1").strip().lower()
_requested = _flag not in ("0", "false", "no", "off")

try:
    import numba as _nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    _nb = None

HAVE_NUMBA = _nb is not None
USE_NUMBA = _requested and HAVE_NUMBA


def njit(fn):
    """``numba.njit`` when available, identity otherwise.

    fastmath stays off so both backends follow IEEE ordering.
    """
    if not HAVE_NUMBA:
        return fn
    return _nb.njit(cache=True, nogil=True)(fn)
