"""Kernel backend selection.

Hot numeric kernels exist in two implementations: a numba-compiled one
(``hardedge._kernels_numba``) and a pure numpy/scipy one
(``hardedge._kernels_numpy``). The active backend is chosen by the
``RNM_BACKEND`` environment variable ("numba" or "numpy"); when unset, numba
is used if importable, numpy otherwise. ``RNM_THREADS`` caps the numba thread
pool (0 or unset = all available threads).

Both backends produce values that agree to ~1e-12; within a backend all
results are deterministic and independent of the thread count.
"""

from __future__ import annotations

import importlib
import os

VALID_BACKENDS = ("numba", "numpy")


def _numba_available() -> bool:
    try:
        importlib.import_module("numba")
    except ImportError:
        return False
    return True


HAVE_NUMBA = _numba_available()


def _from_env() -> str:
    name = os.environ.get("RNM_BACKEND", "").strip().lower()
    if not name:
        return "numba" if HAVE_NUMBA else "numpy"
    if name not in VALID_BACKENDS:
        raise ValueError(f"RNM_BACKEND must be one of {VALID_BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("RNM_BACKEND=numba but numba is not importable")
    return name


_active = _from_env()


def active() -> str:
    """Name of the backend currently serving kernel calls."""
    return _active


def set_backend(name: str) -> None:
    """Switch kernel backend at runtime ("numba" or "numpy")."""
    global _active
    if name not in VALID_BACKENDS:
        raise ValueError(f"backend must be one of {VALID_BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ImportError("numba backend requested but numba is not importable")
    _active = name


def kernels():
    """Module object implementing the kernel API for the active backend."""
    if _active == "numba":
        from . import _kernels_numba as mod
    else:
        from . import _kernels_numpy as mod
    return mod


def apply_thread_cap(requested: int | None = None) -> int:
    """Cap numba parallelism.

    ``requested`` overrides the RNM_THREADS environment variable; 0 means all
    cores. Returns the thread count in effect (1 for the numpy backend, which
    is single threaded).
    """
    if requested is None:
        raw = os.environ.get("RNM_THREADS", "0").strip()
        try:
            requested = int(raw) if raw else 0
        except ValueError:
            raise ValueError(f"RNM_THREADS must be an integer, got {raw!r}")
    if requested < 0:
        raise ValueError("thread cap must be >= 0")
    if _active != "numba":
        return 1
    import numba

    maximum = numba.config.NUMBA_NUM_THREADS
    count = maximum if requested == 0 else min(requested, maximum)
    numba.set_num_threads(count)
    return count
