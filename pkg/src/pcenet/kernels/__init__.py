"""Hot numeric kernels with two interchangeable backends.

The numba backend is used by default; set the environment variable
``PCENET_NO_NUMBA=1`` (before import) to force the pure-numpy fallback.
Both backends implement identical semantics; ``benchmarks/bench_kernels.py``
compares their throughput.
"""

import os

from . import numpy_impl

_DISABLED = os.environ.get("PCENET_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

if _DISABLED:
    _impl = numpy_impl
    USE_NUMBA = False
else:
    try:
        from . import numba_impl as _impl

        USE_NUMBA = True
    except ImportError:  # numba missing or broken: degrade silently
        _impl = numpy_impl
        USE_NUMBA = False

sep_filter = _impl.sep_filter
im2col3x3 = _impl.im2col3x3
col2im3x3 = _impl.col2im3x3
adaptive_avg_pool = _impl.adaptive_avg_pool
adaptive_avg_pool_grad = _impl.adaptive_avg_pool_grad
render_spots = _impl.render_spots

__all__ = [
    "USE_NUMBA",
    "sep_filter",
    "im2col3x3",
    "col2im3x3",
    "adaptive_avg_pool",
    "adaptive_avg_pool_grad",
    "render_spots",
]
