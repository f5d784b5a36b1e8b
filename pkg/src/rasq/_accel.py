"""Pick the compiled kernel when it is importable, else the Python one.

Set ``RASQ_PURE_PYTHON=1`` to force the fallback.
"""

import os

COMPILED = False
if os.environ.get("RASQ_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _kernel as kernel

        COMPILED = True
    except ImportError:
        from . import _kernel_py as kernel
else:
    from . import _kernel_py as kernel

__all__ = ["kernel", "COMPILED"]
