"""Kernel backend selection.

Set ``CURVEBALL_BACKEND=numpy`` to run every hot loop as plain Python over
numpy arrays instead of numba-compiled code. Both backends share one source
and produce bit-identical trajectories for a given seed.
"""
import os

BACKEND = os.environ.get("CURVEBALL_BACKEND", "numba").strip().lower()

if BACKEND not in ("numba", "numpy"):
    raise ImportError(f"CURVEBALL_BACKEND must be 'numba' or 'numpy', got {BACKEND!r}")

if BACKEND == "numba":
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        BACKEND = "numpy"

if BACKEND == "numba":

    def jit(fn):
        return njit(cache=True, nogil=True)(fn)

else:

    def jit(fn):
        return fn
