"""Numba switch.

Kernels in :mod:`kfree.kernels` exist twice: an ``@njit`` loop version and a
vectorised numpy version.  ``USE_NUMBA`` picks which one the public
dispatchers call.  Set ``KFREE_DISABLE_NUMBA=1`` (or numba's own
``NUMBA_DISABLE_JIT=1``) to force the numpy path.
"""

import os

DISABLE_ENV = "KFREE_DISABLE_NUMBA"


def _flag(name):
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None and not _flag("NUMBA_DISABLE_JIT")
USE_NUMBA = HAVE_NUMBA and not _flag(DISABLE_ENV)


def njit(func):
    """Compile ``func`` with numba when it is importable, else return it as is.

    Compilation is lazy, so merely importing the kernels module costs nothing.
    """
    if numba is None:
        return func
    return numba.njit(cache=True, nogil=True)(func)


def backend():
    return "numba" if USE_NUMBA else "numpy"
