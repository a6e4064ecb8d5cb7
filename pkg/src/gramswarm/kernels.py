"""Kernel backend selection.

The hot inner loops (derivation, ant simulation, postfix evaluation) exist
twice: a Cython extension (``_kernels_c``) and a pure-Python fallback
(``_kernels_py``).  The compiled backend is used when it imported cleanly;
set ``GRAMSWARM_PURE=1`` to force the fallback.  ``benchmarks/bench_kernels.py``
compares the two.
"""

from __future__ import annotations

import os

from . import _kernels_py


def _select():
    if os.environ.get("GRAMSWARM_PURE", "").strip() not in ("", "0"):
        return _kernels_py
    try:
        from . import _kernels_c

        return _kernels_c
    except ImportError:
        return _kernels_py


_impl = _select()

BACKEND = _impl.BACKEND_NAME
Deriver = _impl.Deriver
run_ant = _impl.run_ant
eval_postfix = _impl.eval_postfix
eval_bool_postfix = _impl.eval_bool_postfix


def backend_name() -> str:
    """Name of the active backend: ``compiled`` or ``python``."""
    return BACKEND
