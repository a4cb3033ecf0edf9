"""Numba switch.

Hot kernels are written once in a numba-compatible subset of Python and
compiled with ``@njit`` when numba is importable.  Setting the environment
variable ``CURVJUMP_DISABLE_NUMBA=1`` (read at import time) routes every
dispatcher to the pure-numpy fallback instead.
"""

import os

_FLAG = os.environ.get("CURVJUMP_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED

numba_default = {
    "nogil": True,
    "cache": True,
    "fastmath": False,
    "error_model": "numpy",
}


def njit(func):
    """Compile ``func`` with the package defaults, or return it unchanged."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(**numba_default)(func)


def backend():
    return "numba" if USE_NUMBA else "numpy"
