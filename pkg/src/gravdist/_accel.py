"""JIT selection for the integration kernels.

Set ``GRAVDIST_DISABLE_NUMBA=1`` (or run without numba installed) to execute the
kernels as plain Python/numpy. Both paths run the same source.
"""
from __future__ import annotations

import functools
import os

_FLAG = os.environ.get("GRAVDIST_DISABLE_NUMBA", "").strip().lower()

NUMBA_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if NUMBA_DISABLED:
        raise ImportError
    from numba import njit as _numba_njit

    NUMBA_OK = True
except ImportError:
    NUMBA_OK = False
    _numba_njit = None


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator.

    The fallback exposes ``py_func`` on the wrapped function so callers can
    reach the interpreted version uniformly.
    """
    if NUMBA_OK:
        return _numba_njit(*args, **kwargs)

    def decorate(func):
        @functools.wraps(func)
        def wrapper(*a, **kw):
            return func(*a, **kw)

        wrapper.py_func = func
        return wrapper

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return decorate(args[0])
    return decorate


__all__ = ["njit", "NUMBA_OK", "NUMBA_DISABLED"]
