"""Select the kernel implementation at import time.

The compiled extension is preferred. Set ``AMCCR_PURE_PYTHON=1`` to force
the numpy fallback.
"""

import os

from amccr import _fallback

if os.environ.get("AMCCR_PURE_PYTHON"):
    kernels = _fallback
else:
    try:
        from amccr import _kernels as kernels
    except ImportError:
        kernels = _fallback

BACKEND = kernels.NAME
