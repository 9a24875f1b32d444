"""Kernel dispatch: compiled ``_ckernels`` when importable, else ``_pykernels``.

Set ``QSELECT_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

if os.environ.get("QSELECT_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        from . import _pykernels as _impl
        BACKEND = "python"

enumerate_candidates = _impl.enumerate_candidates
anneal_sa = _impl.anneal_sa
anneal_sqa = _impl.anneal_sqa
rx_layer = _impl.rx_layer
ry_layer = _impl.ry_layer
cx_chain = _impl.cx_chain

__all__ = [
    "BACKEND", "enumerate_candidates", "anneal_sa", "anneal_sqa", "rx_layer", "ry_layer", "cx_chain",
]
