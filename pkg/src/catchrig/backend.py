"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python
twin is the fallback. Set CATCHRIG_PURE=1 to force the fallback (used
by the benchmark and the equivalence tests).
"""

from __future__ import annotations

import os

from . import _pure


def _select():
    if os.environ.get("CATCHRIG_PURE", "") not in ("", "0"):
        return _pure
    try:
        from . import _kernel
        return _kernel
    except ImportError:
        return _pure


active = _select()


def use(name: str) -> None:
    """Switch the active kernel ('pure' or 'compiled'). Testing hook."""
    global active
    if name == "pure":
        active = _pure
    elif name == "compiled":
        from . import _kernel
        active = _kernel
    else:
        raise ValueError(f"unknown backend {name!r}")


def name() -> str:
    return active.BACKEND_NAME
