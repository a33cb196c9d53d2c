"""Optional numba acceleration for the hot kernels.

Kernels are written as plain numpy-on-scalars loops so the exact same
source runs in two modes:

* jitted (default) when numba imports cleanly, via ``@maybe_njit``;
* pure Python/numpy fallback when numba is missing or when the
  environment variable ``RANKBOUND_DISABLE_NUMBA`` is set to a
  non-empty value other than ``0``.

Both modes execute the identical statements in the identical order, so
results are bit-for-bit the same; only speed differs.  The dispatcher
keeps a handle to the undecorated function (``.py_func`` under numba)
which the benchmark script uses to time the two paths side by side.
"""

import os

_flag = os.environ.get("RANKBOUND_DISABLE_NUMBA", "").strip()
_disabled_by_env = _flag not in ("", "0")

try:
    if _disabled_by_env:
        raise ImportError("numba disabled by RANKBOUND_DISABLE_NUMBA")
    from numba import njit as _njit

    NUMBA_ENABLED = True
except ImportError:
    _njit = None
    NUMBA_ENABLED = False


def maybe_njit(*args, **kwargs):
    """``numba.njit`` when acceleration is on, identity otherwise.

    Usable both bare (``@maybe_njit``) and with options
    (``@maybe_njit(cache=True)``).  In fallback mode the wrapped
    function gains a ``py_func`` attribute pointing to itself so
    callers can address the pure path uniformly.
    """

    def decorate(func):
        if NUMBA_ENABLED:
            return _njit(**kwargs)(func)
        func.py_func = func
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return decorate(args[0])
    if args:
        raise TypeError("maybe_njit takes only keyword options")
    return decorate
