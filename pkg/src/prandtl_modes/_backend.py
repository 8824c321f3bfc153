"""Pick the kernel implementation once, at import time."""

import os

kernels = None
BACKEND = "python"

if os.environ.get("PRANDTL_MODES_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        kernels = None

if kernels is None:
    from . import _kernels_py as kernels  # type: ignore[no-redef]

    BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
