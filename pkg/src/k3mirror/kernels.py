"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting ``K3MIRROR_PURE=1``
forces the pure-Python fallback.
"""

import os

from . import _pykernels
from ._pykernels import BudgetExceeded

try:
    if os.environ.get("K3MIRROR_PURE", "") not in ("", "0"):
        raise ImportError("pure backend requested")
    from . import _ckernels as _impl
except ImportError:
    _impl = _pykernels

BACKEND = _impl.BACKEND
q_values = _impl.q_values
iso_backtrack = _impl.iso_backtrack


def backends():
    """Every importable backend module, pure first."""
    out = [_pykernels]
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out.append(_ckernels)
    return out


__all__ = ["BACKEND", "BudgetExceeded", "q_values", "iso_backtrack", "backends"]
