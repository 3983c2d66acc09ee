"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise
the numpy fallback. Set ``REGBENCH_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
kernels = _pykernels

if not os.environ.get("REGBENCH_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        kernels = _ckernels
        BACKEND = "cython"

householder_qr = kernels.householder_qr
jacobi_eigh = kernels.jacobi_eigh
