"""Cost-equivalence classes under simultaneous line relabeling and inversion.

This module is the readable reference. The database and search code use the
batch kernels in :mod:`rcsynth.kernels`, which are tested against it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .core import Circuit, Gate, Permutation, WidthError, inverse


@lru_cache(maxsize=None)
def line_perms(n: int) -> tuple[tuple[int, ...], ...]:
    """Line permutations in ``itertools.permutations`` order (identity first)."""
    return tuple(itertools.permutations(range(n)))


@lru_cache(maxsize=None)
def bit_permutation(line_perm: tuple[int, ...]) -> tuple[int, ...]:
    """The map on ``[0, 2**n)`` that moves bit ``k`` of an index to bit ``line_perm[k]``."""
    n = len(line_perm)
    out = []
    for x in range(1 << n):
        y = 0
        for k in range(n):
            if x >> k & 1:
                y |= 1 << line_perm[k]
        out.append(y)
    return tuple(out)


@dataclass(frozen=True)
class Relabeling:
    line_perm: tuple[int, ...]
    inverted: bool = False

    def __post_init__(self) -> None:
        lp = tuple(self.line_perm)
        if sorted(lp) != list(range(len(lp))):
            raise ValueError(f"not a line permutation: {lp}")
        object.__setattr__(self, "line_perm", lp)

    @classmethod
    def identity(cls, n: int) -> "Relabeling":
        return cls(tuple(range(n)))

    @classmethod
    def from_index(cls, n: int, index: int) -> "Relabeling":
        """Inverse of :attr:`index`: ``index = 2 * perm_rank + inverted``."""
        return cls(line_perms(n)[index // 2], bool(index & 1))

    @property
    def n(self) -> int:
        return len(self.line_perm)

    @property
    def index(self) -> int:
        return 2 * line_perms(self.n).index(self.line_perm) + int(self.inverted)

    def inverse(self) -> "Relabeling":
        inv = [0] * self.n
        for k, v in enumerate(self.line_perm):
            inv[v] = k
        return Relabeling(tuple(inv), self.inverted)


def all_relabelings(n: int) -> list[Relabeling]:
    return [Relabeling(p, inv) for p in line_perms(n) for inv in (False, True)]


def relabel(f: Permutation, r: Relabeling) -> Permutation:
    """``sigma . f' . sigma^-1`` with ``f' = f`` or its inverse, ``sigma`` from the line map."""
    if r.n != f.n:
        raise WidthError(f"relabeling of width {r.n} applied to width {f.n}")
    sigma = bit_permutation(r.line_perm)
    src = inverse(f).table if r.inverted else f.table
    out = [0] * f.size
    for x in range(f.size):
        out[sigma[x]] = sigma[src[x]]
    return Permutation(f.n, tuple(out))


def class_members(f: Permutation) -> frozenset[Permutation]:
    return frozenset(relabel(f, r) for r in all_relabelings(f.n))


@dataclass(frozen=True)
class CanonicalForm:
    rep: Permutation
    witness: Relabeling


def canonical_rep(f: Permutation) -> CanonicalForm:
    """Lexicographically smallest class member, with the first relabeling reaching it."""
    best = None
    for r in all_relabelings(f.n):
        g = relabel(f, r)
        if best is None or g.table < best.rep.table:
            best = CanonicalForm(g, r)
    return best


def transport_gate(g: Gate, line_perm: tuple[int, ...]) -> Gate:
    return Gate(g.kind, line_perm[g.target], frozenset(line_perm[c] for c in g.controls))


def transport_circuit(c: Circuit, r: Relabeling) -> Circuit:
    """A circuit for ``relabel(f, r)`` given a circuit ``c`` for ``f``."""
    if r.n != c.n:
        raise WidthError(f"relabeling of width {r.n} applied to width {c.n}")
    gates = [transport_gate(g, r.line_perm) for g in c.gates]
    if r.inverted:
        gates.reverse()
    return Circuit(c.n, tuple(gates))
