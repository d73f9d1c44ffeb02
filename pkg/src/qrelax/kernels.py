"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise, or
when ``QRELAX_PURE_PYTHON`` is set to a non-empty value, the pure-Python
``_pykernels`` module is used. ``BACKEND`` names the active one.
"""

import os

from . import _pykernels

if os.environ.get("QRELAX_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

GAUSSIAN, UNIFORM, TRIANGULAR, SINC2 = 0, 1, 2, 3

fourier_integral = _impl.fourier_integral
plate_choi_sum = _impl.plate_choi_sum
adaptive_simpson = _pykernels.adaptive_simpson


def available_backends():
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
