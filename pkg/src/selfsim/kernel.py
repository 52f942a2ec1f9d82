"""Kernel selection: compiled extension when available, pure Python otherwise.

Set SELFSIM_PURE=1 to force the pure-Python engine (used by the
benchmark and by tests that cross-check the two implementations).
"""

import os

if os.environ.get("SELFSIM_PURE") == "1":
    from selfsim import _pykernel as _impl
else:
    try:
        from selfsim import _ckernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        from selfsim import _pykernel as _impl

collect = _impl.collect
mul = _impl.mul
inv = _impl.inv
pw = _impl.pw


def backend_name():
    """'compiled' or 'pure', whichever was selected at import."""
    return "compiled" if _impl.__name__.endswith("_ckernel") else "pure"
