"""Kernel selection: compiled extension when importable, numpy fallback otherwise.

Set SHARPTAIL_PURE=1 in the environment to force the fallback (useful for
benchmarking and for environments without a compiler).
"""

import os

if os.environ.get("SHARPTAIL_PURE"):
    from ._convolve_py import convolve_repeat
    BACKEND = "python"
else:
    try:
        from ._convolve import convolve_repeat
        BACKEND = "compiled"
    except ImportError:
        from ._convolve_py import convolve_repeat
        BACKEND = "python"

__all__ = ["convolve_repeat", "BACKEND"]
