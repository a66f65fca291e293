"""Compute-backend selection.

The hot kernels in :mod:`iontomo._kernels` exist twice: a numba ``@njit``
version and a pure-numpy fallback.  The environment variable
``IONTOMO_BACKEND`` picks one at import time:

* ``auto``  (default) -- numba if importable, numpy otherwise
* ``numba`` -- require numba, raise if missing
* ``numpy`` -- force the fallback (numba never imported)

Within a backend all kernels use a fixed summation order per output element,
so results are deterministic regardless of thread schedule.
"""

import os

_ENV_VAR = "IONTOMO_BACKEND"
_choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"{_ENV_VAR} must be one of 'auto', 'numba', 'numpy'; got {_choice!r}"
    )

if _choice == "numpy":
    USE_NUMBA = False
else:
    try:
        import numba  # noqa: F401

        USE_NUMBA = True
    except ImportError:
        if _choice == "numba":
            raise ImportError(
                f"{_ENV_VAR}=numba requested but numba is not importable"
            )
        USE_NUMBA = False

BACKEND = "numba" if USE_NUMBA else "numpy"


def backend_name():
    return BACKEND
