"""Event-loop kernels with a compiled core and a pure-Python fallback.

Both backends implement the same two entry points with the same floating
point operation order, so their outputs are bit-identical. The compiled
extension is preferred when importable; set ``TASKAGE_KERNEL=python`` or
``TASKAGE_KERNEL=c`` to force a backend (forcing ``c`` raises if the
extension is unavailable).
"""

import os

_FORCED = os.environ.get("TASKAGE_KERNEL", "").strip().lower()
if _FORCED not in ("", "c", "python"):
    raise ImportError(
        f"TASKAGE_KERNEL must be 'c' or 'python', got {_FORCED!r}")

if _FORCED == "python":
    from . import _engine_py as _engine_mod
    BACKEND = "python"
else:
    try:
        from . import _engine as _engine_mod
        BACKEND = "c"
    except ImportError:
        if _FORCED == "c":
            raise
        from . import _engine_py as _engine_mod
        BACKEND = "python"

simulate_fixed = _engine_mod.simulate_fixed
simulate_adaptive = _engine_mod.simulate_adaptive

# Integer codes shared by both backends.
SIGN_PAPER, SIGN_DESCENT = 0, 1
BIND_SERVICE_START, BIND_ARRIVAL = 0, 1

__all__ = [
    "BACKEND", "simulate_fixed", "simulate_adaptive",
    "SIGN_PAPER", "SIGN_DESCENT", "BIND_SERVICE_START", "BIND_ARRIVAL",
]
