"""Optional numba acceleration.

Kernels are written once in the subset of Python that numba compiles and are
decorated with :func:`jit`.  Setting ``BESSELHIT_NO_NUMBA=1`` in the
environment (before import) keeps them as plain Python functions operating on
numpy scalars, which gives bit-identical results at a fraction of the speed.
"""

import functools
import os

import numpy as np

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

_DISABLED = os.environ.get("BESSELHIT_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

USE_NUMBA = HAS_NUMBA and not _DISABLED


def jit(func):
    """Compile ``func`` with ``numba.njit`` or leave it as Python."""
    if USE_NUMBA:
        return numba.njit(cache=True)(func)

    # uint64 hashing relies on modular wrap-around, which numpy warns about
    @functools.wraps(func)
    def wrapper(*args):
        with np.errstate(over="ignore"):
            return func(*args)

    wrapper.py_func = func
    return wrapper


def backend():
    return "numba" if USE_NUMBA else "python"
