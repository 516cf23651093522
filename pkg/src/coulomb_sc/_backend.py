"""Numba-or-NumPy backend selection for the hot kernels.

Everything in ``_kernels`` is written as nopython-compilable plain Python.
With numba present (the default) those functions are JIT compiled; setting
the environment variable ``COULOMB_SC_DISABLE_NUMBA=1`` -- or running
without numba installed -- executes the identical source as pure
Python/NumPy.  Results agree between backends; only speed differs.
The flag is read once at import time.
"""

import os

_TRUTHY = {"1", "true", "yes", "on"}

_DISABLED = os.environ.get("COULOMB_SC_DISABLE_NUMBA", "").strip().lower() in _TRUTHY

try:
    if _DISABLED:
        raise ImportError("numba disabled via COULOMB_SC_DISABLE_NUMBA")
    from numba import njit, prange

    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):
        """No-op stand-in for numba.njit: runs the decorated source as-is."""
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(fn):
            return fn

        return wrap

    prange = range


def backend_name() -> str:
    """'numba' when kernels are JIT compiled, 'numpy' for the fallback."""
    return "numba" if NUMBA_ENABLED else "numpy"
