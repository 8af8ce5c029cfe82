"""Numba switch.

When ``VQPT_DISABLE_NUMBA`` is set to a truthy value, or numba is not
importable, :mod:`vqpt.kernels` selects its vectorized numpy backend.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

DISABLED = os.environ.get("VQPT_DISABLE_NUMBA", "").strip().lower() not in _FALSY
USE_NUMBA = numba is not None and not DISABLED

