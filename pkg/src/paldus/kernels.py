"""Backend selection for the statevector kernels.

The compiled extension is used when it imports; ``PALDUS_KERNEL=python``
forces the numpy fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels


def _load() -> ModuleType:
    if os.environ.get("PALDUS_KERNEL", "").lower() == "python":
        return _pykernels
    try:
        from . import _ckernels  # type: ignore[attr-defined]
    except ImportError:
        return _pykernels
    return _ckernels


backend: ModuleType = _load()
BACKEND: str = backend.NAME


def available() -> dict[str, ModuleType]:
    out = {"python": _pykernels}
    try:
        from . import _ckernels  # type: ignore[attr-defined]

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out


def use(name: str) -> None:
    """Switch backend at runtime (used by the benchmark and equivalence tests)."""
    global backend, BACKEND
    mods = available()
    if name not in mods:
        raise ValueError(f"kernel backend {name!r} is not available; have {sorted(mods)}")
    backend = mods[name]
    BACKEND = name
