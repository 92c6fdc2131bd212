"""Backend selection for the compiled kernels.

Set ``QAPOLAR_BACKEND=numpy`` to force the pure-numpy path; the default
(``auto``) uses numba when it imports cleanly.  ``QAPOLAR_BACKEND=numba``
makes a missing numba an import error instead of a silent fallback.
"""

from __future__ import annotations

import os

_REQUESTED = os.environ.get("QAPOLAR_BACKEND", "auto").strip().lower()
if _REQUESTED not in {"auto", "numba", "numpy"}:
    raise ImportError(f"QAPOLAR_BACKEND must be auto, numba or numpy, got {_REQUESTED!r}")

HAVE_NUMBA = False
if _REQUESTED != "numpy":
    try:
        import numba  # noqa: F401

        HAVE_NUMBA = True
    except ImportError:
        if _REQUESTED == "numba":
            raise

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator."""
    if HAVE_NUMBA:
        import numba

        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn
