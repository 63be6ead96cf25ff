"""Kernel backend selection.

The compiled extension is preferred when importable; the pure backend is
the fallback.  Set SELBERG_KERNELS=python (or =compiled) to force one.
"""

from __future__ import annotations

import os

from . import _pykernels

_choice = os.environ.get("SELBERG_KERNELS", "auto").lower()

if _choice in ("auto", "compiled", "c"):
    try:
        from . import _ckernels as _impl
    except ImportError:
        if _choice != "auto":
            raise
        _impl = _pykernels
else:
    _impl = _pykernels

BACKEND = _impl.BACKEND

erf = _impl.erf
erfc = _impl.erfc
erfcx = _impl.erfcx
erf_arr = _impl.erf_arr
erfc_arr = _impl.erfc_arr
erfcx_arr = _impl.erfcx_arr
digamma = _impl.digamma
digamma_arr = _impl.digamma_arr
loggamma = _impl.loggamma
zeta_pair = _impl.zeta_pair
zeta_pair_arr = _impl.zeta_pair_arr

BACKENDS = {"python": _pykernels}
if _impl is not _pykernels:
    BACKENDS["compiled"] = _impl
