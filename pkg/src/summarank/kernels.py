"""Kernel dispatch: compiled alignment core with a pure-Python fallback.

The compiled extension (summarank._alignment, built from Cython) is picked
at import time when available; otherwise the pure-Python implementation
serves. Set SUMMARANK_PURE_PYTHON=1 to force the fallback, e.g. for the
benchmark in benchmarks/bench_kernels.py.
"""

from __future__ import annotations

import os
from typing import Sequence

from summarank import _alignment_py

_FORCE_PURE = os.environ.get("SUMMARANK_PURE_PYTHON", "") not in ("", "0")

if not _FORCE_PURE:
    try:
        from summarank import _alignment as _compiled
    except ImportError:
        _compiled = None
else:
    _compiled = None

BACKEND: str = "cython" if _compiled is not None else "python"

if _compiled is not None:
    import numpy as np

    def align_counts(hyp_ids: Sequence[int], ref_ids: Sequence[int]) -> tuple[int, int]:
        return _compiled.align_counts(
            np.asarray(hyp_ids, dtype=np.int32),
            np.asarray(ref_ids, dtype=np.int32),
        )

    def lcs_length(hyp_ids: Sequence[int], ref_ids: Sequence[int]) -> int:
        return _compiled.lcs_length(
            np.asarray(hyp_ids, dtype=np.int32),
            np.asarray(ref_ids, dtype=np.int32),
        )

else:
    align_counts = _alignment_py.align_counts
    lcs_length = _alignment_py.lcs_length

align_counts.__doc__ = _alignment_py.align_counts.__doc__
lcs_length.__doc__ = _alignment_py.lcs_length.__doc__
