"""Select the compiled torus kernel when available, else the numpy fallback.

Set CROWN_KERNELS_BACKEND=python to force the fallback.
"""

from __future__ import annotations

import os

from . import _torus_py

BACKEND = "python"
density_band_sum = _torus_py.density_band_sum

if os.environ.get("CROWN_KERNELS_BACKEND", "").lower() != "python":
    try:
        from . import _torus_core
    except ImportError:
        pass
    else:
        BACKEND = "compiled"
        density_band_sum = _torus_core.density_band_sum


def kernels() -> dict:
    """Both implementations that can be loaded, keyed by backend name."""
    out = {"python": _torus_py.density_band_sum}
    try:
        from . import _torus_core
    except ImportError:
        return out
    out["compiled"] = _torus_core.density_band_sum
    return out
