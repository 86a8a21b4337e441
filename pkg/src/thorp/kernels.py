"""Backend selection for the hot kernels.

The compiled Cython module is used when it was built and importable;
otherwise, or when the environment variable ``THORP_PURE`` is set to a
non-empty value other than ``0``, the numpy fallback is used.
"""

import os
from itertools import permutations
from functools import lru_cache

import numpy as np

from . import _pykernels

_force_pure = os.environ.get("THORP_PURE", "") not in ("", "0")

if _force_pure:
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

rank_rows = _impl.rank_rows
compose_rank = _impl.compose_rank
step = _impl.step
convolve = _impl.convolve


def backends():
    """Every importable backend module, keyed by name."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
        found["cython"] = _ckernels
    except ImportError:
        pass
    return found


@lru_cache(maxsize=None)
def all_perms(n: int) -> np.ndarray:
    """All of S_n as an (n!, n) read-only array, row r having Lehmer rank r."""
    arr = np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)
    arr.setflags(write=False)
    return arr
