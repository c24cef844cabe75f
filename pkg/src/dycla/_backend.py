"""Select the cascade kernel backend at import time.

The compiled extension is preferred; set ``DYCLA_PURE_PYTHON=1`` to force
the interpreted fallback (useful for checking the two agree).
"""

import os

if os.environ.get("DYCLA_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        from . import _kernels_py as kernels

BACKEND = kernels.NAME
