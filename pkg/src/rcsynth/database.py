"""Breadth-first database of gate-count-optimal functions, keyed by canonical class.

Each entry stores the optimal gate count of a class and one gate that can be
stripped from the canonical representative (from either end of the circuit)
to reach the previous level. The gate is stored in the canonical frame, so
reconstruction re-canonicalizes at every step.

File format (little-endian)::

    b"RCDB" | version u16 | n u8 | depth u8 | entry count u64
    per level 0..depth: count u64, then count x (key u64, gc u8, gate u8, reserved u16)
    CRC-32 u32 of everything before it
"""

from __future__ import annotations

import logging
import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .canonical import Relabeling, relabel, transport_gate
from .core import (
    NO_GATE,
    Circuit,
    Gate,
    Permutation,
    WidthError,
    apply_gate,
    compose,
    gate_from_id,
    gate_library,
)

log = logging.getLogger(__name__)

MAGIC = b"RCDB"
VERSION = 1
_HEADER = struct.Struct("<4sHBBQ")
_COUNT = struct.Struct("<Q")
ENTRY_DTYPE = np.dtype([("key", "<u8"), ("gc", "u1"), ("gate", "u1"), ("reserved", "<u2")])

# parents expanded per kernel call while building; bounds peak memory
_CHUNK = 1 << 16


class DatabaseError(Exception):
    """Corrupt, truncated or incompatible database."""


class DatabaseBuildError(DatabaseError):
    def __init__(self, message: str, entries_built: int):
        super().__init__(f"{message} (entries built so far: {entries_built})")
        self.entries_built = entries_built


@dataclass(eq=False)
class OptimalDb:
    n: int
    depth: int
    level_keys: list[np.ndarray]  # sorted canonical keys with gc == level
    level_gates: list[np.ndarray]  # parallel GateIds in the canonical frame
    keys: np.ndarray = field(init=False, repr=False)  # all keys, sorted
    gcs: np.ndarray = field(init=False, repr=False)
    gates: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        keys = np.concatenate(self.level_keys)
        gcs = np.concatenate([np.full(len(k), i, dtype=np.uint8) for i, k in enumerate(self.level_keys)])
        gates = np.concatenate(self.level_gates)
        order = np.argsort(keys, kind="stable")
        self.keys = np.ascontiguousarray(keys[order])
        self.gcs = np.ascontiguousarray(gcs[order])
        self.gates = np.ascontiguousarray(gates[order])
        if len(self.keys) > 1 and np.any(self.keys[1:] == self.keys[:-1]):
            raise DatabaseError("duplicate canonical key")

    def __len__(self) -> int:
        return len(self.keys)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OptimalDb):
            return NotImplemented
        return (
            self.n == other.n
            and self.depth == other.depth
            and len(self.level_keys) == len(other.level_keys)
            and all(np.array_equal(a, b) for a, b in zip(self.level_keys, other.level_keys))
            and all(np.array_equal(a, b) for a, b in zip(self.level_gates, other.level_gates))
        )

    def level_counts(self) -> list[int]:
        return [len(k) for k in self.level_keys]

    def find(self, canonical_key: int) -> int:
        i = int(np.searchsorted(self.keys, np.uint64(canonical_key)))
        if i < len(self.keys) and int(self.keys[i]) == canonical_key:
            return i
        return -1

    def gc_of_key(self, key: int) -> int | None:
        """Stored gate count of any (not necessarily canonical) packed function."""
        c, _ = kernels.canon_key(key, self.n)
        i = self.find(c)
        return None if i < 0 else int(self.gcs[i])


def build(n: int, depth: int, progress=None) -> OptimalDb:
    """Level-by-level BFS over canonical classes.

    Level ``i + 1`` holds the canonical forms of every function obtained by
    appending or prepending one gate to a level-``i`` representative, minus
    the classes already seen at levels ``i`` and ``i - 1``.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    gate_library(n)  # validates n
    identity = Permutation.identity(n).key
    level_keys = [np.array([identity], dtype=np.uint64)]
    level_gates = [np.array([NO_GATE], dtype=np.uint8)]
    built = 1
    try:
        for i in range(depth):
            parents = level_keys[i]
            seen = level_keys[i - 1] if i else np.empty(0, dtype=np.uint64)
            new_keys, new_gates = [], []
            for start in range(0, len(parents), _CHUNK):
                ck, cg = kernels.expand(parents[start:start + _CHUNK], n)
                uk, first = np.unique(ck, return_index=True)
                keep = ~(np.isin(uk, parents, assume_unique=True) | np.isin(uk, seen, assume_unique=True))
                new_keys.append(uk[keep])
                new_gates.append(cg[first[keep]])
            keys = np.concatenate(new_keys)
            gates = np.concatenate(new_gates)
            # earlier chunks win ties so the result does not depend on chunking
            keys, first = np.unique(keys, return_index=True)
            level_keys.append(keys)
            level_gates.append(gates[first])
            built += len(keys)
            log.info("level %d: %d classes", i + 1, len(keys))
            if progress:
                progress(i + 1, len(keys))
            if not len(keys):
                break
    except MemoryError:
        raise DatabaseBuildError("out of memory while building database", built) from None
    while len(level_keys) < depth + 1:
        level_keys.append(np.empty(0, dtype=np.uint64))
        level_gates.append(np.empty(0, dtype=np.uint8))
    return OptimalDb(n, depth, level_keys, level_gates)


def lookup_gc(db: OptimalDb, f: Permutation) -> int | None:
    if f.n != db.n:
        raise WidthError(f"database width {db.n} != function width {f.n}")
    return db.gc_of_key(f.key)


def reconstruct(db: OptimalDb, f: Permutation) -> Circuit:
    """Optimal circuit for a database-resident function, peeled one gate at a time."""
    gc = lookup_gc(db, f)
    if gc is None:
        raise KeyError(f"function not in database (depth {db.depth})")
    head: list[Gate] = []
    tail: list[Gate] = []
    cur = f
    while gc > 0:
        ckey, wit = kernels.canon_key(cur.key, db.n)
        idx = db.find(ckey)
        gid = int(db.gates[idx])
        if gid == NO_GATE:
            raise DatabaseError(f"missing gate for entry with gc {gc}")
        # back from the canonical frame into cur's frame
        back = Relabeling.from_index(db.n, wit).inverse()
        g = transport_gate(gate_from_id(gid, db.n), back.line_perm)
        as_last = apply_gate(cur, g)
        if lookup_gc(db, as_last) == gc - 1:
            tail.append(g)
            cur = as_last
        else:
            as_first = compose(Permutation(db.n, tuple(g.act(x) for x in range(cur.size))), cur)
            if lookup_gc(db, as_first) != gc - 1:
                raise DatabaseError(f"stripping stored gate does not reduce gc {gc}")
            head.append(g)
            cur = as_first
        gc -= 1
    if not cur.is_identity():
        raise DatabaseError("reconstruction did not reach the identity")
    return Circuit(db.n, tuple(head) + tuple(reversed(tail)))


def member(db: OptimalDb, level: int, index: int, relabel_index: int) -> Permutation:
    """Concrete class member ``relabel(rep, r)`` of a level entry."""
    rep = Permutation.from_key(db.n, int(db.level_keys[level][index]))
    return relabel(rep, Relabeling.from_index(db.n, relabel_index))


def save(db: OptimalDb, path: str | Path) -> None:
    parts = [_HEADER.pack(MAGIC, VERSION, db.n, db.depth, len(db))]
    for i, (keys, gates) in enumerate(zip(db.level_keys, db.level_gates)):
        rec = np.zeros(len(keys), dtype=ENTRY_DTYPE)
        rec["key"] = keys
        rec["gc"] = i
        rec["gate"] = gates
        parts.append(_COUNT.pack(len(keys)))
        parts.append(rec.tobytes())
    body = b"".join(parts)
    Path(path).write_bytes(body + struct.pack("<I", zlib.crc32(body)))


def load(path: str | Path) -> OptimalDb:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size + 4:
        raise DatabaseError("truncated database file")
    magic, version, n, depth, total = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise DatabaseError(f"bad magic {magic!r}")
    if version != VERSION:
        raise DatabaseError(f"unsupported format version {version}")
    body, (crc,) = data[:-4], struct.unpack("<I", data[-4:])
    pos = _HEADER.size
    level_keys, level_gates = [], []
    for i in range(depth + 1):
        if pos + _COUNT.size > len(body):
            raise DatabaseError("truncated database file")
        (count,) = _COUNT.unpack_from(body, pos)
        pos += _COUNT.size
        end = pos + count * ENTRY_DTYPE.itemsize
        if end > len(body):
            raise DatabaseError("truncated database file")
        rec = np.frombuffer(body, dtype=ENTRY_DTYPE, count=count, offset=pos)
        if np.any(rec["gc"] != i):
            raise DatabaseError(f"level {i} holds entries with another gate count")
        level_keys.append(rec["key"].astype(np.uint64))
        level_gates.append(rec["gate"].copy())
        pos = end
    if pos != len(body):
        raise DatabaseError("trailing bytes after last level")
    if zlib.crc32(body) != crc:
        raise DatabaseError("checksum mismatch")
    db = OptimalDb(n, depth, level_keys, level_gates)
    if len(db) != total:
        raise DatabaseError(f"header says {total} entries, file holds {len(db)}")
    return db
