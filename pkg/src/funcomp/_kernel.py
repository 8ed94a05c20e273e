"""Select the compiled GF(2) kernels when available.

Set ``FUNCOMP_PURE=1`` to force the pure-Python fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
gf2_rref = _pykernels.gf2_rref
gf2_reduce = _pykernels.gf2_reduce
gf2_parity_profile = _pykernels.gf2_parity_profile

if os.environ.get("FUNCOMP_PURE") != "1":
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        gf2_rref = _ckernels.gf2_rref
        gf2_reduce = _ckernels.gf2_reduce
        gf2_parity_profile = _ckernels.gf2_parity_profile

__all__ = ["BACKEND", "gf2_rref", "gf2_reduce", "gf2_parity_profile"]
