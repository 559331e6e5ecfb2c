"""Pure-Python kernels. Same signatures and results as the compiled ``_ckernels``.

Keys are packed output vectors (see :func:`rcsynth.core.pack_table`).
``sig``/``sig_inv`` are ``(n!, 2**n)`` uint8 arrays of bit permutations, and
relabeling index ``2 * p + inv`` means line permutation ``p`` with optional
inversion. ``NOT_FOUND`` (255) marks a key absent from a database.
"""

from __future__ import annotations

import numpy as np

NOT_FOUND = 255


def _unpack(key, n, size):
    mask = size - 1
    return [(key >> (n * (size - 1 - i))) & mask for i in range(size)]


def _pack(table, n):
    key = 0
    for v in table:
        key = (key << n) | v
    return key


def _canon(f, n, size, sig, sig_inv):
    finv = [0] * size
    for i, v in enumerate(f):
        finv[v] = i
    best = list(f)
    wit = 0
    for p in range(len(sig)):
        s = sig[p]
        si = sig_inv[p]
        for inv in (0, 1):
            if p == 0 and inv == 0:
                continue
            src = finv if inv else f
            cand = [s[src[si[x]]] for x in range(size)]
            if cand < best:
                best = cand
                wit = 2 * p + inv
    return _pack(best, n), wit


def _find(db_keys, key):
    i = int(np.searchsorted(db_keys, np.uint64(key)))
    if i < len(db_keys) and int(db_keys[i]) == key:
        return i
    return -1


def canon_keys(keys, n, sig, sig_inv):
    size = 1 << n
    sig = sig.tolist()
    sig_inv = sig_inv.tolist()
    out = np.empty(len(keys), dtype=np.uint64)
    wit = np.empty(len(keys), dtype=np.uint8)
    for k, key in enumerate(keys.tolist()):
        c, w = _canon(_unpack(key, n, size), n, size, sig, sig_inv)
        out[k] = c
        wit[k] = w
    return out, wit


def expand(keys, n, gate_val, sig, sig_inv, gate_relabel):
    """Canonical children of every key, both appending and prepending each gate.

    Row ``k`` of the result holds ``2 * G`` children of ``keys[k]``: first the
    append-side child per gate, then the prepend-side child per gate. The
    returned gate ids are the generating gate moved into the child's canonical
    frame.
    """
    size = 1 << n
    G = gate_val.shape[0]
    gv = gate_val.tolist()
    sl = sig.tolist()
    sil = sig_inv.tolist()
    gr = gate_relabel.tolist()
    out = np.empty(len(keys) * 2 * G, dtype=np.uint64)
    gates = np.empty(len(keys) * 2 * G, dtype=np.uint8)
    pos = 0
    for key in keys.tolist():
        f = _unpack(key, n, size)
        for side in (0, 1):
            for g in range(G):
                a = gv[g]
                child = [a[v] for v in f] if side == 0 else [f[a[y]] for y in range(size)]
                c, w = _canon(child, n, size, sl, sil)
                out[pos] = c
                gates[pos] = gr[w >> 1][g]
                pos += 1
    return out, gates


def children(key, n, gate_val, sig, sig_inv, db_keys, db_gc):
    """Remainders left after placing each gate first, and their stored gate counts."""
    size = 1 << n
    G = gate_val.shape[0]
    r = _unpack(key, n, size)
    sl = sig.tolist()
    sil = sig_inv.tolist()
    child_keys = np.empty(G, dtype=np.uint64)
    child_gc = np.empty(G, dtype=np.uint8)
    for g, a in enumerate(gate_val.tolist()):
        child = [r[a[y]] for y in range(size)]
        child_keys[g] = _pack(child, n)
        c, _ = _canon(child, n, size, sl, sil)
        i = _find(db_keys, c)
        child_gc[g] = db_gc[i] if i >= 0 else NOT_FOUND
    return child_keys, child_gc


def mitm_scan(key, n, level_keys, sig, sig_inv, db_keys, db_gc, max_j, first_only):
    """Search splits ``f = r then g`` with ``r`` in the class of a level entry.

    Returns ``(j, rep_index, relabel_index)`` for the smallest partner gate
    count ``j <= max_j`` found (the first one if ``first_only``), or
    ``(NOT_FOUND, -1, -1)``.
    """
    size = 1 << n
    f = _unpack(key, n, size)
    sl = sig.tolist()
    sil = sig_inv.tolist()
    best = (NOT_FOUND, -1, -1)
    for k, rkey in enumerate(level_keys.tolist()):
        R = _unpack(rkey, n, size)
        Rinv = [0] * size
        for i, v in enumerate(R):
            Rinv[v] = i
        for p in range(len(sl)):
            s = sl[p]
            si = sil[p]
            for inv in (0, 1):
                # inverse of relabel(R, (p, inv)) is relabel(R, (p, 1 - inv))
                src = R if inv else Rinv
                g = [f[s[src[si[x]]]] for x in range(size)]
                c, _ = _canon(g, n, size, sl, sil)
                i = _find(db_keys, c)
                if i < 0:
                    continue
                j = int(db_gc[i])
                if j <= max_j and j < best[0]:
                    best = (j, k, 2 * p + inv)
                    if first_only:
                        return best
    return best
