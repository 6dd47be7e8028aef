"""Select the coordinate-descent kernel at import time.

Prefers the compiled extension; falls back to the numpy implementation
when the build is missing or the JOINTSPARSE_PURE_PYTHON environment
variable is set to a non-empty value other than "0".
"""

from __future__ import annotations

import os

from . import _cd_py

_force_pure = os.environ.get("JOINTSPARSE_PURE_PYTHON", "") not in ("", "0")

if _force_pure:
    cd_sweep = _cd_py.cd_sweep
    BACKEND = "python"
else:
    try:
        from ._cd_fast import cd_sweep

        BACKEND = "compiled"
    except ImportError:
        cd_sweep = _cd_py.cd_sweep
        BACKEND = "python"
