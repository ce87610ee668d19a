"""Kernel backend selection.

The compiled Cython module is preferred when the extension built; the
NumPy implementation is always available. MUSICAL_BACKEND=pure or
=compiled overrides the default.
"""

from __future__ import annotations

import os

from . import pure

try:
    from . import _core as compiled
except ImportError:
    compiled = None

_ENV = "MUSICAL_BACKEND"


def available_backends() -> tuple:
    names = []
    if compiled is not None:
        names.append("compiled")
    names.append("pure")
    return tuple(names)


def default_backend() -> str:
    forced = os.environ.get(_ENV, "").strip().lower()
    if forced in ("compiled", "pure"):
        return forced
    return "compiled" if compiled is not None else "pure"


def get_backend(name: str | None = None):
    """Return the kernel module for name (None or "auto" selects)."""
    if name in (None, "auto", ""):
        name = default_backend()
    if name == "pure":
        return pure
    if name == "compiled":
        if compiled is None:
            raise RuntimeError(
                "compiled kernels are not available in this installation"
            )
        return compiled
    raise ValueError(f"unknown kernel backend {name!r}")
