"""Backend selection.  The compiled machine is used when the extension
was built and every value of the program fits in int64; ALONZO_PURE=1
forces the pure-Python machine."""

from __future__ import annotations

import os

from .program import Program
from .pyeval import PyMachine

try:  # pragma: no cover - depends on the build
    from ._fastcore import Machine as _FastMachine
except ImportError:  # pragma: no cover
    _FastMachine = None

HAVE_FASTCORE = _FastMachine is not None


def pure_forced() -> bool:
    return os.environ.get("ALONZO_PURE", "") not in ("", "0")


def machine_for(prog: Program, prefer: str = "auto"):
    """prefer: auto | python | cython."""
    if prefer == "python" or pure_forced() or _FastMachine is None:
        return PyMachine(prog)
    if prog.fits_int64():
        return _FastMachine(prog)
    if prefer == "cython":
        raise ValueError("program values do not fit in int64")
    return PyMachine(prog)


def backend_name() -> str:
    return "python" if pure_forced() or _FastMachine is None else "cython"
