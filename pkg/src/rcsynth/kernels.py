"""Hot-loop kernels with backend selection.

The compiled extension ``rcsynth._ckernels`` is used when it imports; the
pure-Python ``rcsynth._pykernels`` is the fallback. Setting the environment
variable ``RCSYNTH_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from types import ModuleType

import numpy as np

from . import _pykernels
from .canonical import bit_permutation, line_perms, transport_gate
from .core import gate_id, gate_library
from .cost import gate_qc, peres_pairable

NOT_FOUND = _pykernels.NOT_FOUND


def _select() -> tuple[ModuleType, str]:
    if os.environ.get("RCSYNTH_PURE_PYTHON", "") not in ("", "0"):
        return _pykernels, "python"
    try:
        from . import _ckernels
    except ImportError:
        return _pykernels, "python"
    return _ckernels, "cython"


backend, BACKEND = _select()


@dataclass(frozen=True, eq=False)
class Tables:
    """Per-width lookup tables shared by both kernel backends."""

    n: int
    gate_val: np.ndarray  # (G, 2**n): gate action on a value
    sig: np.ndarray  # (n!, 2**n): bit permutation per line permutation
    sig_inv: np.ndarray
    gate_relabel: np.ndarray  # (n!, G): gate id after moving its lines
    gate_qc: np.ndarray  # (G,)
    pairable: np.ndarray  # (G, G) bool, Peres grouping of adjacent gates

    @property
    def num_gates(self) -> int:
        return self.gate_val.shape[0]


@lru_cache(maxsize=None)
def tables(n: int) -> Tables:
    lib = gate_library(n)
    size = 1 << n
    gate_val = np.array([[g.act(v) for v in range(size)] for g in lib], dtype=np.uint8)
    perms = line_perms(n)
    sig = np.array([bit_permutation(p) for p in perms], dtype=np.uint8)
    sig_inv = np.argsort(sig, axis=1).astype(np.uint8)
    gate_relabel = np.array([[gate_id(transport_gate(g, p), n) for g in lib] for p in perms], dtype=np.uint8)
    qc = np.array([gate_qc(g) for g in lib], dtype=np.int64)
    pairable = np.array([[peres_pairable(a, b) for b in lib] for a in lib], dtype=bool)
    for arr in (gate_val, sig, sig_inv, gate_relabel, qc, pairable):
        arr.setflags(write=False)
    return Tables(n, gate_val, sig, sig_inv, gate_relabel, qc, pairable)


def canon_keys(keys, n: int, impl: ModuleType | None = None):
    """Canonical keys and witness relabeling indices for a uint64 key array."""
    t = tables(n)
    impl = impl or backend
    return impl.canon_keys(np.ascontiguousarray(keys, dtype=np.uint64), n, t.sig, t.sig_inv)


def canon_key(key: int, n: int) -> tuple[int, int]:
    out, wit = canon_keys(np.array([key], dtype=np.uint64), n)
    return int(out[0]), int(wit[0])


def expand(keys, n: int, impl: ModuleType | None = None):
    t = tables(n)
    impl = impl or backend
    return impl.expand(np.ascontiguousarray(keys, dtype=np.uint64), n, t.gate_val, t.sig, t.sig_inv, t.gate_relabel)


def children(key: int, n: int, db_keys, db_gc, impl: ModuleType | None = None):
    t = tables(n)
    impl = impl or backend
    return impl.children(key, n, t.gate_val, t.sig, t.sig_inv, db_keys, db_gc)


def mitm_scan(key: int, n: int, level_keys, db_keys, db_gc, max_j: int, first_only: bool,
              impl: ModuleType | None = None) -> tuple[int, int, int]:
    t = tables(n)
    impl = impl or backend
    j, k, r = impl.mitm_scan(key, n, np.ascontiguousarray(level_keys, dtype=np.uint64), t.sig, t.sig_inv,
                             db_keys, db_gc, max_j, first_only)
    return int(j), int(k), int(r)
