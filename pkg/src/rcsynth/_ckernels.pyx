# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Mirrors ``_pykernels`` exactly; see its docstrings."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, uint64_t, int64_t
from libc.string cimport memcpy

cnp.import_array()

ctypedef uint64_t u64
ctypedef uint8_t u8

cdef enum:
    MAXSIZE = 16
    MAXPERM = 24
    MISSING = 255

NOT_FOUND = MISSING


cdef struct Ctx:
    int n
    int size
    int nperm
    u8 sig[MAXPERM][MAXSIZE]
    u8 sig_inv[MAXPERM][MAXSIZE]


cdef void _init_ctx(Ctx* c, int n, const u8[:, ::1] sig, const u8[:, ::1] sig_inv):
    cdef int p, x
    c.n = n
    c.size = 1 << n
    c.nperm = sig.shape[0]
    for p in range(c.nperm):
        for x in range(c.size):
            c.sig[p][x] = sig[p, x]
            c.sig_inv[p][x] = sig_inv[p, x]


cdef inline void _unpack(u64 key, const Ctx* c, u8* out) noexcept nogil:
    cdef int i
    cdef u64 mask = c.size - 1
    for i in range(c.size - 1, -1, -1):
        out[i] = <u8>(key & mask)
        key >>= c.n


cdef inline u64 _pack(const u8* t, const Ctx* c) noexcept nogil:
    cdef int i
    cdef u64 key = 0
    for i in range(c.size):
        key = (key << c.n) | t[i]
    return key


cdef u64 _canon(const u8* f, const Ctx* c, int* wit) noexcept nogil:
    """Minimum packed key over all relabelings, comparing entries with early exit."""
    cdef u8 finv[MAXSIZE]
    cdef u8 best[MAXSIZE]
    cdef u8 cand[MAXSIZE]
    cdef const u8* src
    cdef const u8* s
    cdef const u8* si
    cdef int i, p, inv, x, state, aborted
    cdef u8 v
    for i in range(c.size):
        finv[f[i]] = <u8>i
        best[i] = f[i]
    wit[0] = 0
    for p in range(c.nperm):
        s = c.sig[p]
        si = c.sig_inv[p]
        for inv in range(2):
            if p == 0 and inv == 0:
                continue
            src = &finv[0] if inv else f
            state = 0
            aborted = 0
            for x in range(c.size):
                v = s[src[si[x]]]
                if state == 0:
                    if v > best[x]:
                        aborted = 1
                        break
                    if v < best[x]:
                        state = 1
                cand[x] = v
            if not aborted and state == 1:
                memcpy(best, cand, c.size)
                wit[0] = 2 * p + inv
    return _pack(best, c)


cdef inline int64_t _find(const u64* keys, int64_t m, u64 key) noexcept nogil:
    cdef int64_t lo = 0, hi = m, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if keys[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    if lo < m and keys[lo] == key:
        return lo
    return -1


def canon_keys(const u64[::1] keys, int n, const u8[:, ::1] sig, const u8[:, ::1] sig_inv):
    cdef Ctx c
    _init_ctx(&c, n, sig, sig_inv)
    cdef Py_ssize_t m = keys.shape[0], k
    out = np.empty(m, dtype=np.uint64)
    wit = np.empty(m, dtype=np.uint8)
    cdef u64[::1] ov = out
    cdef u8[::1] wv = wit
    cdef u8 f[MAXSIZE]
    cdef int w
    with nogil:
        for k in range(m):
            _unpack(keys[k], &c, f)
            ov[k] = _canon(f, &c, &w)
            wv[k] = <u8>w
    return out, wit


def expand(const u64[::1] keys, int n, const u8[:, ::1] gate_val, const u8[:, ::1] sig,
           const u8[:, ::1] sig_inv, const u8[:, ::1] gate_relabel):
    cdef Ctx c
    _init_ctx(&c, n, sig, sig_inv)
    cdef Py_ssize_t m = keys.shape[0], k
    cdef int G = gate_val.shape[0], g, x, w, side
    out = np.empty(m * 2 * G, dtype=np.uint64)
    gates = np.empty(m * 2 * G, dtype=np.uint8)
    cdef u64[::1] ov = out
    cdef u8[::1] gv = gates
    cdef u8 f[MAXSIZE]
    cdef u8 child[MAXSIZE]
    cdef Py_ssize_t pos = 0
    with nogil:
        for k in range(m):
            _unpack(keys[k], &c, f)
            for side in range(2):
                for g in range(G):
                    if side == 0:
                        for x in range(c.size):
                            child[x] = gate_val[g, f[x]]
                    else:
                        for x in range(c.size):
                            child[x] = f[gate_val[g, x]]
                    ov[pos] = _canon(child, &c, &w)
                    gv[pos] = gate_relabel[w >> 1, g]
                    pos += 1
    return out, gates


def children(u64 key, int n, const u8[:, ::1] gate_val, const u8[:, ::1] sig,
             const u8[:, ::1] sig_inv, const u64[::1] db_keys, const u8[::1] db_gc):
    cdef Ctx c
    _init_ctx(&c, n, sig, sig_inv)
    cdef int G = gate_val.shape[0], g, x, w
    child_keys = np.empty(G, dtype=np.uint64)
    child_gc = np.empty(G, dtype=np.uint8)
    cdef u64[::1] kv = child_keys
    cdef u8[::1] cv = child_gc
    cdef u8 r[MAXSIZE]
    cdef u8 child[MAXSIZE]
    cdef int64_t i
    cdef int64_t m = db_keys.shape[0]
    _unpack(key, &c, r)
    for g in range(G):
        for x in range(c.size):
            child[x] = r[gate_val[g, x]]
        kv[g] = _pack(child, &c)
        i = _find(&db_keys[0], m, _canon(child, &c, &w)) if m else -1
        cv[g] = db_gc[i] if i >= 0 else MISSING
    return child_keys, child_gc


def mitm_scan(u64 key, int n, const u64[::1] level_keys, const u8[:, ::1] sig,
              const u8[:, ::1] sig_inv, const u64[::1] db_keys, const u8[::1] db_gc,
              int max_j, bint first_only):
    cdef Ctx c
    _init_ctx(&c, n, sig, sig_inv)
    cdef u8 f[MAXSIZE]
    cdef u8 R[MAXSIZE]
    cdef u8 Rinv[MAXSIZE]
    cdef u8 g[MAXSIZE]
    cdef const u8* src
    cdef const u8* s
    cdef const u8* si
    cdef Py_ssize_t L = level_keys.shape[0], k
    cdef int64_t m = db_keys.shape[0], i
    cdef int p, inv, x, w, j
    cdef int best_j = MISSING, best_k = -1, best_r = -1
    _unpack(key, &c, f)
    if m == 0:
        return (best_j, best_k, best_r)
    with nogil:
        for k in range(L):
            _unpack(level_keys[k], &c, R)
            for x in range(c.size):
                Rinv[R[x]] = <u8>x
            for p in range(c.nperm):
                s = c.sig[p]
                si = c.sig_inv[p]
                for inv in range(2):
                    src = &R[0] if inv else &Rinv[0]
                    for x in range(c.size):
                        g[x] = f[s[src[si[x]]]]
                    i = _find(&db_keys[0], m, _canon(g, &c, &w))
                    if i < 0:
                        continue
                    j = db_gc[i]
                    if j <= max_j and j < best_j:
                        best_j = j
                        best_k = k
                        best_r = 2 * p + inv
                        if first_only:
                            break
                if first_only and best_k >= 0:
                    break
            if first_only and best_k >= 0:
                break
    return (best_j, best_k, best_r)
