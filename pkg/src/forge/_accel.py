"""Optional numba acceleration.

Set ``FORGE_NO_NUMBA=1`` to force the pure numpy/Python code path; the kernels
are then run uncompiled, which is slower but gives identical results.
"""

import os

DISABLED = os.environ.get("FORGE_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if DISABLED:
        raise ImportError
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    numba = None
    HAVE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when acceleration is on, identity otherwise."""
    if HAVE_NUMBA:
        return numba.njit(*args, cache=True, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f
