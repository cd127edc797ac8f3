"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise, or when
``AIRYSPEC_PURE_PYTHON=1`` is set, the numpy fallback is used.  Both expose
``airy_eval``, ``trig_sum`` and ``fk_path_values`` with identical signatures.
"""

import os

from . import _pykernels

python = _pykernels
compiled = None

if os.environ.get("AIRYSPEC_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

active = compiled if compiled is not None else python
BACKEND = active.BACKEND


def thread_count():
    """Worker cap from AIRYSPEC_THREADS (default: all available cores)."""
    raw = os.environ.get("AIRYSPEC_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)
