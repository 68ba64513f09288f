"""Kernel backend selection.

The compiled Cython extension is used when present; the numpy fallback
otherwise. Override with DJCQSL_BACKEND=python|cython (``cython`` raises if
the extension is missing instead of silently falling back).
"""

import os

_choice = os.environ.get("DJCQSL_BACKEND", "auto").strip().lower()
if _choice not in {"auto", "cython", "python"}:
    raise RuntimeError(
        f"DJCQSL_BACKEND={_choice!r} not understood; use auto, cython or python"
    )

if _choice == "python":
    from . import _fallback as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _choice == "cython":
            raise
        from . import _fallback as _impl

BACKEND = _impl.BACKEND
propagator_table = _impl.propagator_table
path_table = _impl.path_table
