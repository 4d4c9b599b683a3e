"""Kernel backend selection.

Prefers the compiled extension (``hypercheck._kernels``) when it has been
built; otherwise the numpy fallback.  Set ``HYPERCHECK_PURE=1`` to force the
fallback, e.g. for benchmarking or to cross-check results.
"""

import os

if os.environ.get("HYPERCHECK_PURE"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

weighted_sum = _impl.weighted_sum
weighted_dot = _impl.weighted_dot
weighted_pow_sum = _impl.weighted_pow_sum
axis_mix = _impl.axis_mix
