"""Kernel-lane selection: compiled extension if importable, else pure Python.

Set ``POLYDESCENT_BACKEND=pure`` or ``=compiled`` to force a lane.  The
compiled lane is built from ``_core.pyx`` at install time; a failed build
falls back silently unless explicitly forced.
"""

from __future__ import annotations

import os

from . import kernels_py

_FORCED = os.environ.get("POLYDESCENT_BACKEND", "").strip().lower()
if _FORCED not in ("", "pure", "compiled"):
    raise RuntimeError(
        f"POLYDESCENT_BACKEND must be 'pure' or 'compiled', got {_FORCED!r}"
    )

if _FORCED == "pure":
    kernels = kernels_py
else:
    try:
        from . import _core as kernels  # type: ignore[no-redef]
    except ImportError:
        if _FORCED == "compiled":
            raise
        kernels = kernels_py


def backend_name() -> str:
    return "compiled" if kernels.COMPILED else "pure"


def available_backends() -> dict[str, object]:
    """Importable kernel lanes keyed by name (used by tests and benchmarks)."""
    lanes: dict[str, object] = {"pure": kernels_py}
    try:
        from . import _core

        lanes["compiled"] = _core
    except ImportError:
        pass
    return lanes
