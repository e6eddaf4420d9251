"""Kernel backend selection.

The query kernels exist twice: scalar loops compiled with numba and a
pure-numpy path vectorised across queries. Numba is used when importable
unless ``EPRINDEX_NO_NUMBA`` is set to a non-empty value other than ``0``.
"""
from __future__ import annotations

import importlib
import os

BACKENDS = ("numba", "numpy")


def _numba_importable() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_DISABLED = os.environ.get("EPRINDEX_NO_NUMBA", "") not in ("", "0")
HAVE_NUMBA = _numba_importable()
DEFAULT_BACKEND = "numba" if HAVE_NUMBA and not NUMBA_DISABLED else "numpy"


def get_kernels(backend: str | None = None):
    """Return the kernel module for ``backend`` (default: env-selected)."""
    backend = backend or DEFAULT_BACKEND
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return importlib.import_module(f"eprindex._kernels_{backend}")


def available_backends() -> tuple[str, ...]:
    return BACKENDS if HAVE_NUMBA else ("numpy",)
