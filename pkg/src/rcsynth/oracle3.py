"""Exhaustive ground truth for 3-line functions.

Deliberately self-contained: raw packed keys, no canonical classes, its own
gate tables and its own quantum-cost automaton. Agreement with the database
and the enumeration engine is therefore independent evidence.

Quantum cost per exact circuit length is computed by dynamic programming over
states (function, last gate, last gate still ungrouped). Grouping a Toffoli
with an adjacent CNOT as soon as possible, scanning left to right, yields a
maximum set of Peres groups, so the automaton reproduces the cost of every
sequence exactly and min/max over sequences fall out of the DP.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field

import numpy as np

N_LINES = 3
SIZE = 8
NUM_FUNCTIONS = 40320
# lengths beyond the optimal gate count tracked for quantum cost
EXTRA = 3
_BIG = 1 << 14


def _gates() -> list[tuple[int, int]]:
    """(target, control mask) for every NOT/CNOT/Toffoli on three lines."""
    out = []
    for k in range(3):
        for t in range(3):
            for mask in range(8):
                if not mask >> t & 1 and bin(mask).count("1") == k:
                    out.append((t, mask))
    return out


GATES = _gates()
_QC = np.array([(1, 1, 5)[bin(m).count("1")] for _, m in GATES], dtype=np.int64)


def _pairable(a: tuple[int, int], b: tuple[int, int]) -> bool:
    (ta, ma), (tb, mb) = a, b
    if bin(ma).count("1") == 1 and bin(mb).count("1") == 2:
        (ta, ma), (tb, mb) = (tb, mb), (ta, ma)
    if bin(ma).count("1") != 2 or bin(mb).count("1") != 1:
        return False
    return ma == (mb | 1 << tb)


_PAIR = np.array([[_pairable(a, b) for b in GATES] for a in GATES])


def _pack(tables: np.ndarray) -> np.ndarray:
    keys = np.zeros(len(tables), dtype=np.int64)
    for i in range(SIZE):
        keys = (keys << 3) | tables[:, i].astype(np.int64)
    return keys


@dataclass
class FullTable3:
    tables: np.ndarray  # (40320, 8) output vectors, sorted by key
    keys: np.ndarray  # packed 24-bit keys, ascending
    gc: np.ndarray  # optimal gate count
    qc_min: np.ndarray  # (L, 40320) min quantum cost over circuits of exactly that length
    qc_max: np.ndarray
    counts: np.ndarray  # (L, 40320) number of circuits of exactly that length
    level_sizes: list[int] = field(default_factory=list)

    @property
    def qc_opt(self) -> np.ndarray:
        """Minimal quantum cost among gate-count-optimal circuits."""
        return self.qc_min[self.gc, np.arange(NUM_FUNCTIONS)]

    @property
    def qc_best(self) -> np.ndarray:
        """Minimal quantum cost over lengths ``gc .. gc + 3``."""
        idx = np.arange(NUM_FUNCTIONS)
        return np.min([self.qc_min[self.gc + e, idx] for e in range(EXTRA + 1)], axis=0)

    @property
    def optimal_counts(self) -> np.ndarray:
        return self.counts[self.gc, np.arange(NUM_FUNCTIONS)]

    def index(self, table) -> int:
        key = int(_pack(np.asarray([table], dtype=np.int64))[0])
        i = int(np.searchsorted(self.keys, key))
        if i >= NUM_FUNCTIONS or self.keys[i] != key:
            raise KeyError(table)
        return i

    def gc_of(self, table) -> int:
        return int(self.gc[self.index(table)])

    def gc_histogram(self) -> dict[int, int]:
        vals, counts = np.unique(self.gc, return_counts=True)
        return dict(zip(vals.tolist(), counts.tolist()))

    def cheaper_longer_instances(self, before: int = 24, after: int = 13) -> list[int]:
        """Functions whose best optimal-length QC is ``before`` while one gate more reaches ``after``."""
        idx = np.arange(NUM_FUNCTIONS)
        nxt = self.qc_min[self.gc + 1, idx]
        return np.flatnonzero((self.qc_opt == before) & (nxt == after)).tolist()

    def qc_drops(self) -> np.ndarray:
        """``qc_opt - (best QC with one extra gate)`` per function (positive = longer is cheaper)."""
        idx = np.arange(NUM_FUNCTIONS)
        return self.qc_opt - self.qc_min[self.gc + 1, idx]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["section", "key", "value"])
        for gc, cnt in self.gc_histogram().items():
            w.writerow(["gc_histogram", gc, cnt])
        for name, arr in (("qc_opt_histogram", self.qc_opt), ("qc_best_histogram", self.qc_best)):
            vals, cnts = np.unique(arr, return_counts=True)
            for v, c in zip(vals.tolist(), cnts.tolist()):
                w.writerow([name, v, c])
        vec = lambda i: "[" + ",".join(map(str, self.tables[i].tolist())) + "]"  # noqa: E731
        top = int(np.argmax(self.optimal_counts))
        w.writerow(["extremal", "max_optimal_circuits", f"{int(self.optimal_counts[top])} {vec(top)}"])
        w.writerow(["extremal", "max_gc_functions", int(np.sum(self.gc == self.gc.max()))])
        drops = self.qc_drops()
        best = int(np.argmax(drops))
        w.writerow(["extremal", "largest_qc_drop_one_more_gate",
                    f"{int(self.qc_opt[best])}->{int(self.qc_opt[best] - drops[best])} {vec(best)}"])
        for i in self.cheaper_longer_instances():
            w.writerow(["qc24_opt_qc13_longer", vec(i), int(self.gc[i])])
        return buf.getvalue()


def build_full_table(reduced: bool = True) -> FullTable3:
    """BFS over all 40,320 functions, then the per-length cost DP.

    With ``reduced`` the DP skips sequences that repeat a gate immediately.
    """
    tables = np.array(list(itertools.permutations(range(SIZE))), dtype=np.int64)
    keys = _pack(tables)
    order = np.argsort(keys)
    tables, keys = tables[order], keys[order]

    gate_val = np.zeros((len(GATES), SIZE), dtype=np.int64)
    for g, (t, m) in enumerate(GATES):
        for v in range(SIZE):
            gate_val[g, v] = v ^ (1 << t) if v & m == m else v
    # step[f, g]: index of "f followed by gate g"
    step = np.empty((NUM_FUNCTIONS, len(GATES)), dtype=np.int64)
    for g in range(len(GATES)):
        step[:, g] = np.searchsorted(keys, _pack(gate_val[g][tables]))

    gc = np.full(NUM_FUNCTIONS, -1, dtype=np.int64)
    ident = int(np.searchsorted(keys, _pack(np.arange(SIZE)[None, :])[0]))
    gc[ident] = 0
    frontier = np.array([ident])
    sizes = [1]
    while True:
        nxt = np.unique(step[frontier].ravel())
        nxt = nxt[gc[nxt] < 0]
        if not len(nxt):
            break
        gc[nxt] = len(sizes)
        sizes.append(len(nxt))
        frontier = nxt
    max_len = int(gc.max()) + EXTRA

    G = len(GATES)
    start = 2 * G  # state index: 2 * last_gate + free, plus one start state
    n_states = 2 * G + 1
    mn = np.full((n_states, NUM_FUNCTIONS), _BIG, dtype=np.int64)
    mx = np.full((n_states, NUM_FUNCTIONS), -_BIG, dtype=np.int64)
    ct = np.zeros((n_states, NUM_FUNCTIONS), dtype=np.int64)
    mn[start, ident] = mx[start, ident] = 0
    ct[start, ident] = 1
    qc_min = np.full((max_len + 1, NUM_FUNCTIONS), _BIG, dtype=np.int64)
    qc_max = np.full((max_len + 1, NUM_FUNCTIONS), -_BIG, dtype=np.int64)
    counts = np.zeros((max_len + 1, NUM_FUNCTIONS), dtype=np.int64)
    qc_min[0], qc_max[0], counts[0] = mn.min(0), mx.max(0), ct.sum(0)
    # every gate is an involution, so step[:, g] is its own inverse and the
    # predecessor of f under gate g is step[f, g]
    pred = [np.ascontiguousarray(step[:, g]) for g in range(G)]
    for length in range(1, max_len + 1):
        nmn = np.full_like(mn, _BIG)
        nmx = np.full_like(mx, -_BIG)
        nct = np.zeros_like(ct)
        for s in range(n_states):
            if not ct[s].any():
                continue
            last, free = (None, False) if s == start else divmod(s, 2)
            for g in range(G):
                if reduced and last == g:
                    continue
                paired = bool(free) and _PAIR[last, g]
                ns = 2 * g + (0 if paired else 1)
                cost = int(_QC[g]) - (2 if paired else 0)
                src = pred[g]
                np.minimum(nmn[ns], mn[s][src] + cost, out=nmn[ns])
                np.maximum(nmx[ns], mx[s][src] + cost, out=nmx[ns])
                nct[ns] += ct[s][src]
        # unreachable entries drift away from the sentinels by the added costs
        nmn[nct == 0] = _BIG
        nmx[nct == 0] = -_BIG
        mn, mx, ct = nmn, nmx, nct
        qc_min[length], qc_max[length], counts[length] = mn.min(0), mx.max(0), ct.sum(0)
    return FullTable3(tables, keys, gc, qc_min, qc_max, counts, sizes)


@dataclass
class CrosscheckReport:
    checked: int
    mismatches: list[tuple[tuple[int, ...], int, int | None]]  # (vector, oracle gc, db gc)
    keys: set[int]  # canonical database keys involved in mismatches

    @property
    def ok(self) -> bool:
        return not self.mismatches


def crosscheck(db, table: FullTable3) -> CrosscheckReport:
    """Compare database gate counts with the oracle on every 3-line function."""
    from .kernels import canon_keys

    if db.n != N_LINES:
        raise ValueError("crosscheck needs a 3-line database")
    ckeys, _ = canon_keys(table.keys.astype(np.uint64), N_LINES)
    pos = np.searchsorted(db.keys, ckeys)
    pos = np.minimum(pos, len(db.keys) - 1)
    found = db.keys[pos] == ckeys
    db_gc = np.where(found, db.gcs[pos].astype(np.int64), -1)
    bad = np.flatnonzero(db_gc != table.gc)
    mismatches = [
        (tuple(table.tables[i].tolist()), int(table.gc[i]), None if db_gc[i] < 0 else int(db_gc[i])) for i in bad
    ]
    return CrosscheckReport(NUM_FUNCTIONS, mismatches, {int(ckeys[i]) for i in bad})
