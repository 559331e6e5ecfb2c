"""Exact synthesis on top of an :class:`~rcsynth.database.OptimalDb`.

Orientation: a circuit is built left to right. After a prefix, the remainder
``r`` is what the rest of the circuit must realize, so ``f == compose(prefix, r)``.
Placing gate ``g`` next leaves ``compose(g, r)`` (``g`` is an involution).

Beyond the database depth ``d``, gate counts are certified by splitting: ``f``
has a circuit of length ``<= b`` (with ``d < b <= 2d``) iff some function
``r`` with optimal gate count exactly ``b - d`` leaves ``compose(inverse(r), f)``
inside the database.
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import kernels
from .core import Circuit, Permutation, WidthError, compose, gate_library, inverse
from .cost import PERES_SAVING
from .database import OptimalDb, lookup_gc, member, reconstruct


class HorizonError(Exception):
    """The query needs more gates than the database can certify."""


@dataclass(frozen=True)
class EnumerationRequest:
    f: Permutation
    exact_gc: int | None = None
    slack: int | None = None
    max_count: int | None = None
    time_limit: float | None = None
    threads: int = 1
    # drop sequences with two identical adjacent gates (they cancel)
    reduced: bool = True

    def __post_init__(self) -> None:
        if (self.exact_gc is None) == (self.slack is None):
            raise ValueError("give exactly one of exact_gc and slack")
        if (self.exact_gc or 0) < 0 or (self.slack or 0) < 0:
            raise ValueError("gate counts and slack must be non-negative")


@dataclass
class EnumerationReport:
    gc: int
    qc_min: int | None = None
    qc_max: int | None = None
    count: int = 0
    witness: Circuit | None = None
    complete: bool = True
    seconds: float = 0.0

    def row(self) -> tuple[int, int | None, int | None, int]:
        return (self.gc, self.qc_min, self.qc_max, self.count)


class DistanceOracle:
    """Memoized "optimal gate count of f is at most b" queries against one database."""

    def __init__(self, db: OptimalDb):
        self.db = db
        self.n = db.n
        self.horizon = 2 * db.depth
        # canonical key -> (lower bound, upper bound) on the optimal gate count
        self._bounds: dict[int, tuple[int, int]] = {}
        self._lock = threading.Lock()

    def resident_gc(self, key: int) -> int | None:
        return self.db.gc_of_key(key)

    def at_most(self, key: int, budget: int) -> bool:
        if budget < 0:
            return False
        if budget > self.horizon:
            raise HorizonError(f"budget {budget} exceeds database horizon {self.horizon}")
        ckey, _ = kernels.canon_key(key, self.n)
        i = self.db.find(ckey)
        if i >= 0:
            return int(self.db.gcs[i]) <= budget
        if budget <= self.db.depth:
            return False
        with self._lock:
            lo, hi = self._bounds.get(ckey, (self.db.depth + 1, 10**9))
        if hi <= budget:
            return True
        if lo > budget:
            return False
        split = budget - self.db.depth
        j, _, _ = kernels.mitm_scan(ckey, self.n, self.db.level_keys[split], self.db.keys, self.db.gcs,
                                    self.db.depth, True)
        hit = j != kernels.NOT_FOUND
        with self._lock:
            lo, hi = self._bounds.get(ckey, (self.db.depth + 1, 10**9))
            self._bounds[ckey] = (lo, min(hi, budget)) if hit else (max(lo, budget + 1), hi)
        return hit

    def exact(self, key: int) -> int:
        gc = self.resident_gc(key)
        if gc is not None:
            return gc
        for b in range(self.db.depth + 1, self.horizon + 1):
            if self.at_most(key, b):
                return b
        raise HorizonError(f"optimal gate count exceeds database horizon {self.horizon}")


def _check(db: OptimalDb, f: Permutation) -> None:
    if f.n != db.n:
        raise WidthError(f"database width {db.n} != function width {f.n}")


def optimal_gc(db: OptimalDb, f: Permutation, oracle: DistanceOracle | None = None) -> int:
    _check(db, f)
    return (oracle or DistanceOracle(db)).exact(f.key)


def distance_at_most(db: OptimalDb, f: Permutation, budget: int, oracle: DistanceOracle | None = None) -> bool:
    _check(db, f)
    return (oracle or DistanceOracle(db)).at_most(f.key, budget)


def synthesize_one(db: OptimalDb, f: Permutation, oracle: DistanceOracle | None = None) -> Circuit:
    """One gate-count-optimal circuit for ``f``."""
    d = optimal_gc(db, f, oracle)
    if d <= db.depth:
        return reconstruct(db, f)
    split = d - db.depth
    j, k, r_index = kernels.mitm_scan(f.key, db.n, db.level_keys[split], db.keys, db.gcs, db.depth, True)
    if j == kernels.NOT_FOUND:
        raise HorizonError("no split found although the gate count was certified")
    r = member(db, split, k, r_index)
    rest = compose(inverse(r), f)
    circuit = reconstruct(db, r) + reconstruct(db, rest)
    if len(circuit) != d:
        raise RuntimeError(f"stitched circuit has {len(circuit)} gates, expected {d}")
    return circuit


# ---------------------------------------------------------------------------
# Enumeration


@dataclass
class _Branch:
    """Accumulator for one subtree of the search."""

    gc: int
    qc_min: int | None = None
    qc_max: int | None = None
    count: int = 0
    witness: tuple[int, ...] | None = None
    complete: bool = True
    circuits: list[tuple[int, ...]] = field(default_factory=list)


class _Search:
    def __init__(self, db: OptimalDb, oracle: DistanceOracle, gc: int, max_count: int | None,
                 deadline: float | None, keep: bool, on_circuit: Callable[[tuple[int, ...], int], None] | None,
                 reduced: bool = True):
        self.db = db
        self.reduced = reduced
        self.oracle = oracle
        self.gc = gc
        self.n = db.n
        self.t = kernels.tables(db.n)
        self.qc = self.t.gate_qc.tolist()
        self.pairable = self.t.pairable.tolist()
        self.identity = Permutation.identity(db.n).key
        self.max_count = max_count
        self.deadline = deadline
        self.keep = keep
        self.on_circuit = on_circuit
        self.stop = threading.Event()
        self.total = 0
        self._lock = threading.Lock()

    def passing(self, key: int, budget: int) -> list[tuple[int, int]]:
        """Gates that can come next, with the remainder each leaves behind."""
        child_keys, child_gc = kernels.children(key, self.n, self.db.keys, self.db.gcs)
        out = []
        nb = budget - 1
        for g, (ck, cg) in enumerate(zip(child_keys.tolist(), child_gc.tolist())):
            if cg != kernels.NOT_FOUND:
                ok = cg <= nb
            else:
                ok = nb > self.db.depth and self.oracle.at_most(ck, nb)
            if ok:
                out.append((g, ck))
        return out

    def run(self, key: int, budget: int, prefix: list[int], qc: int, free: bool, acc: _Branch) -> None:
        """Depth-first search; ``qc`` and ``free`` carry the greedy Peres grouping state.

        ``free`` means the last gate is not yet grouped and may pair with the next.
        """
        if self.stop.is_set():
            acc.complete = False
            return
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.stop.set()
            acc.complete = False
            return
        if budget == 0:
            if key == self.identity:
                self._emit(tuple(prefix), qc, acc)
            return
        last = prefix[-1] if prefix else -1
        for g, ck in self.passing(key, budget):
            if self.reduced and g == last:
                continue
            if free and last >= 0 and self.pairable[last][g]:
                cost, nfree = qc + self.qc[g] - PERES_SAVING, False
            else:
                cost, nfree = qc + self.qc[g], True
            prefix.append(g)
            self.run(ck, budget - 1, prefix, cost, nfree, acc)
            prefix.pop()
            if self.stop.is_set():
                acc.complete = False
                return

    def _emit(self, ids: tuple[int, ...], qc: int, acc: _Branch) -> None:
        with self._lock:
            if self.max_count is not None and self.total >= self.max_count:
                self.stop.set()
                acc.complete = False
                return
            self.total += 1
        acc.count += 1
        # depth-first in gate-id order: the first circuit at a new minimum is the least one
        if acc.qc_min is None or qc < acc.qc_min:
            acc.qc_min, acc.witness = qc, ids
        if acc.qc_max is None or qc > acc.qc_max:
            acc.qc_max = qc
        if self.keep:
            acc.circuits.append(ids)
        if self.on_circuit is not None:
            self.on_circuit(ids, qc)


def _merge(gc: int, parts: list[_Branch]) -> _Branch:
    out = _Branch(gc)
    for p in parts:  # parts are in root-gate order
        out.count += p.count
        out.complete &= p.complete
        out.circuits.extend(p.circuits)
        if p.qc_min is not None and (out.qc_min is None or p.qc_min < out.qc_min):
            out.qc_min, out.witness = p.qc_min, p.witness
        if p.qc_max is not None and (out.qc_max is None or p.qc_max > out.qc_max):
            out.qc_max = p.qc_max
    return out


def _enumerate_gc(db, f, gc, oracle, max_count, time_limit, threads, keep, on_circuit, reduced):
    if gc > oracle.horizon:
        raise HorizonError(f"gate count {gc} exceeds database horizon {oracle.horizon}")
    start = time.monotonic()
    deadline = start + time_limit if time_limit is not None else None
    search = _Search(db, oracle, gc, max_count, deadline, keep, on_circuit, reduced)
    if gc == 0:
        acc = _Branch(0)
        search.run(f.key, 0, [], 0, False, acc)
        merged = acc
    else:
        roots = search.passing(f.key, gc)
        qc = search.qc

        def branch(item):
            g, ck = item
            acc = _Branch(gc)
            search.run(ck, gc - 1, [g], qc[g], True, acc)
            return acc

        if threads > 1 and len(roots) > 1 and on_circuit is None:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(branch, roots))
        else:
            parts = [branch(item) for item in roots]
        merged = _merge(gc, parts)
        if search.stop.is_set():
            merged.complete = False
    report = EnumerationReport(
        gc=gc,
        qc_min=merged.qc_min,
        qc_max=merged.qc_max,
        count=merged.count,
        witness=Circuit.from_ids(db.n, merged.witness) if merged.witness is not None else None,
        complete=merged.complete,
        seconds=time.monotonic() - start,
    )
    return report, merged.circuits


def enumerate_all(db: OptimalDb, req: EnumerationRequest, oracle: DistanceOracle | None = None,
                  on_circuit: Callable[[Circuit, int], None] | None = None,
                  keep_circuits: bool = False) -> tuple[list[EnumerationReport], list[Circuit]]:
    """Every gate sequence of the requested length(s) that realizes ``req.f``.

    Non-optimal lengths are included, except (when ``req.reduced``) sequences
    with two identical adjacent gates, which cancel. With ``slack`` the lengths are
    ``o .. o + slack`` for the optimal gate count ``o``. ``on_circuit``
    receives circuits as they are found (single-threaded, depth-first order).
    """
    _check(db, req.f)
    oracle = oracle or DistanceOracle(db)
    if req.exact_gc is not None:
        gcs = [req.exact_gc]
    else:
        o = oracle.exact(req.f.key)
        gcs = list(range(o, o + req.slack + 1))
    callback = None
    if on_circuit is not None:
        def callback(ids, qc):
            on_circuit(Circuit.from_ids(db.n, ids), qc)

    reports, circuits = [], []
    for gc in gcs:
        report, found = _enumerate_gc(db, req.f, gc, oracle, req.max_count, req.time_limit, req.threads,
                                      keep_circuits, callback, req.reduced)
        reports.append(report)
        circuits.extend(Circuit.from_ids(db.n, ids) for ids in found)
    return reports, circuits


def iter_circuits(db: OptimalDb, f: Permutation, gc: int, oracle: DistanceOracle | None = None,
                  reduced: bool = True) -> Iterator[Circuit]:
    """Convenience wrapper returning all circuits of exactly ``gc`` gates."""
    req = EnumerationRequest(f, exact_gc=gc, reduced=reduced)
    _, circuits = enumerate_all(db, req, oracle, keep_circuits=True)
    return iter(circuits)


def qc_minimize(db: OptimalDb, f: Permutation, gc_list, oracle: DistanceOracle | None = None,
                max_count: int | None = None, time_limit: float | None = None,
                threads: int = 1, reduced: bool = True) -> list[EnumerationReport]:
    oracle = oracle or DistanceOracle(db)
    out = []
    for gc in gc_list:
        req = EnumerationRequest(f, exact_gc=gc, max_count=max_count, time_limit=time_limit,
                                 threads=threads, reduced=reduced)
        reports, _ = enumerate_all(db, req, oracle)
        out.append(reports[0])
    return out


def brute_force_circuits(f: Permutation, gc: int, reduced: bool = True) -> list[Circuit]:
    """All gate sequences of length ``gc`` realizing ``f``, with no pruning at all."""
    lib = gate_library(f.n)
    target = f.table
    out = []

    def rec(state: tuple[int, ...], prefix: list[int]) -> None:
        if len(prefix) == gc:
            if state == target:
                out.append(Circuit.from_ids(f.n, prefix))
            return
        for i, g in enumerate(lib):
            if reduced and prefix and prefix[-1] == i:
                continue
            prefix.append(i)
            rec(tuple(g.act(v) for v in state), prefix)
            prefix.pop()

    rec(tuple(range(f.size)), [])
    return out
