"""Reversible functions, NCT/T4 gates, circuits and their text formats.

Conventions used throughout the package:

* A :class:`Permutation` on ``n`` lines is the output vector
  ``[f(0), f(1), ..., f(2**n - 1)]``.
* Wire letter ``a`` is line 0 (least significant bit), ``b`` line 1, and so on.
* Gates in a circuit act left to right: the first written gate acts first.
* ``compose(f, g)`` means "apply ``f`` first, then ``g``", so
  ``compose(f, g).table[i] == g.table[f.table[i]]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

SUPPORTED_WIDTHS = (3, 4)
WIRES = "abcd"
NO_GATE = 0xFF


class FormatError(ValueError):
    """Malformed vector or circuit text."""


class WidthError(ValueError):
    """Objects of different line counts were combined."""


class GateKind(IntEnum):
    NOT = 0
    CNOT = 1
    TOFFOLI3 = 2
    TOFFOLI4 = 3


def _check_width(n: int) -> None:
    if n not in SUPPORTED_WIDTHS:
        raise ValueError(f"unsupported line count {n}; expected 3 or 4")


@dataclass(frozen=True)
class Gate:
    """A NOT/CNOT/Toffoli gate: flips ``target`` iff every control line is 1."""

    kind: GateKind
    target: int
    controls: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "controls", frozenset(self.controls))
        if len(self.controls) != int(self.kind):
            raise ValueError(f"{self.kind.name} takes {int(self.kind)} controls, got {len(self.controls)}")
        if self.target in self.controls:
            raise ValueError("target line cannot also be a control")
        if min(self.lines) < 0:
            raise ValueError("negative line index")

    @classmethod
    def on(cls, target: int, controls: Iterable[int] = ()) -> "Gate":
        controls = frozenset(controls)
        return cls(GateKind(len(controls)), target, controls)

    @property
    def lines(self) -> tuple[int, ...]:
        return (self.target, *sorted(self.controls))

    @property
    def control_mask(self) -> int:
        mask = 0
        for c in self.controls:
            mask |= 1 << c
        return mask

    def fits(self, n: int) -> bool:
        return max(self.lines) < n

    def act(self, value: int) -> int:
        mask = self.control_mask
        if value & mask == mask:
            return value ^ (1 << self.target)
        return value

    def sort_key(self) -> tuple[int, int, int]:
        return (int(self.kind), self.target, self.control_mask)

    def __str__(self) -> str:
        return format_gate(self)


@lru_cache(maxsize=None)
def gate_library(n: int) -> tuple[Gate, ...]:
    """All gates on ``n`` lines, ordered by (kind, target, control bitmask).

    The position of a gate in this tuple is its GateId.
    """
    _check_width(n)
    gates = []
    for kind in GateKind:
        if int(kind) >= n:
            continue
        for target in range(n):
            for mask in range(1 << n):
                if mask >> target & 1 or bin(mask).count("1") != int(kind):
                    continue
                gates.append(Gate(kind, target, frozenset(i for i in range(n) if mask >> i & 1)))
    gates.sort(key=Gate.sort_key)
    return tuple(gates)


@lru_cache(maxsize=None)
def _gate_index(n: int) -> dict[Gate, int]:
    return {g: i for i, g in enumerate(gate_library(n))}


def gate_id(gate: Gate, n: int) -> int:
    try:
        return _gate_index(n)[gate]
    except KeyError:
        raise WidthError(f"gate {gate} does not fit {n} lines") from None


def gate_from_id(gid: int, n: int) -> Gate:
    lib = gate_library(n)
    if gid == NO_GATE or not 0 <= gid < len(lib):
        raise ValueError(f"invalid gate id {gid} for width {n}")
    return lib[gid]


# ---------------------------------------------------------------------------
# Permutations


def pack_table(table: Sequence[int], n: int) -> int:
    """Pack an output vector into an integer, index 0 in the most significant field.

    With this layout integer order equals lexicographic order of the vectors.
    """
    key = 0
    for v in table:
        key = (key << n) | v
    return key


def unpack_key(key: int, n: int) -> tuple[int, ...]:
    size = 1 << n
    mask = size - 1
    return tuple((key >> (n * (size - 1 - i))) & mask for i in range(size))


@dataclass(frozen=True)
class Permutation:
    """A reversible function on ``n`` lines as its output vector."""

    n: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_width(self.n)
        table = tuple(int(v) for v in self.table)
        size = 1 << self.n
        if len(table) != size:
            raise FormatError(f"vector for {self.n} lines needs {size} entries, got {len(table)}")
        if any(not 0 <= v < size for v in table):
            raise FormatError(f"vector values must lie in [0, {size})")
        if len(set(table)) != size:
            raise FormatError("vector is not a bijection (duplicate value)")
        object.__setattr__(self, "table", table)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(n, tuple(range(1 << n)))

    @classmethod
    def from_key(cls, n: int, key: int) -> "Permutation":
        return cls(n, unpack_key(key, n))

    @property
    def key(self) -> int:
        return pack_table(self.table, self.n)

    @property
    def size(self) -> int:
        return 1 << self.n

    def __call__(self, x: int) -> int:
        return self.table[x]

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.table))

    def inverse(self) -> "Permutation":
        return inverse(self)

    def __str__(self) -> str:
        return format_vector(self)


def apply_gate(f: Permutation, g: Gate) -> Permutation:
    """Append ``g`` after ``f``: every output value goes through the gate."""
    if not g.fits(f.n):
        raise WidthError(f"gate {g} does not fit {f.n} lines")
    return Permutation(f.n, tuple(g.act(v) for v in f.table))


def compose(f: Permutation, g: Permutation) -> Permutation:
    """``f`` first, then ``g``."""
    if f.n != g.n:
        raise WidthError(f"cannot compose widths {f.n} and {g.n}")
    return Permutation(f.n, tuple(g.table[v] for v in f.table))


def inverse(f: Permutation) -> Permutation:
    inv = [0] * f.size
    for i, v in enumerate(f.table):
        inv[v] = i
    return Permutation(f.n, tuple(inv))


# ---------------------------------------------------------------------------
# Circuits


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        _check_width(self.n)
        gates = tuple(self.gates)
        for g in gates:
            if not g.fits(self.n):
                raise WidthError(f"gate {g} does not fit {self.n} lines")
        object.__setattr__(self, "gates", gates)

    @classmethod
    def from_ids(cls, n: int, ids: Iterable[int]) -> "Circuit":
        lib = gate_library(n)
        return cls(n, tuple(lib[i] for i in ids))

    def ids(self) -> tuple[int, ...]:
        return tuple(gate_id(g, self.n) for g in self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if self.n != other.n:
            raise WidthError("cannot concatenate circuits of different widths")
        return Circuit(self.n, self.gates + other.gates)

    def reversed(self) -> "Circuit":
        return Circuit(self.n, self.gates[::-1])

    def __str__(self) -> str:
        return format_circuit(self)


def circuit_to_perm(c: Circuit) -> Permutation:
    out = []
    for x in range(1 << c.n):
        for g in c.gates:
            x = g.act(x)
        out.append(x)
    return Permutation(c.n, tuple(out))


# ---------------------------------------------------------------------------
# Text formats

_VECTOR_RE = re.compile(r"^\s*\[?([^\[\]]*)\]?\s*$")


def parse_vector(text: str, n: int | None = None) -> Permutation:
    """Parse ``"[1,0,3,2,5,7,4,6]"``; the width follows from the length unless given."""
    m = _VECTOR_RE.match(text)
    if not m or not m.group(1).strip():
        raise FormatError(f"not a vector: {text!r}")
    try:
        values = tuple(int(tok) for tok in m.group(1).replace(",", " ").split())
    except ValueError:
        raise FormatError(f"non-integer entry in vector {text!r}") from None
    if n is None:
        widths = {8: 3, 16: 4}
        if len(values) not in widths:
            raise FormatError(f"vector length {len(values)} is neither 8 nor 16")
        n = widths[len(values)]
    return Permutation(n, values)


def format_vector(f: Permutation) -> str:
    return "[" + ",".join(str(v) for v in f.table) + "]"


_TOKEN_RE = re.compile(r"^(?:N([a-z])|C([a-z])-([a-z])|T4?([a-z]{2,3})-([a-z]))$")


def parse_gate(token: str, n: int = 4) -> Gate:
    m = _TOKEN_RE.match(token)
    if not m:
        raise FormatError(f"unknown gate token {token!r}")
    if m.group(1):
        target, controls = m.group(1), ""
    elif m.group(2):
        target, controls = m.group(3), m.group(2)
    else:
        target, controls = m.group(5), m.group(4)
        if token.startswith("T4") and len(controls) != 3:
            raise FormatError(f"T4 gate needs three controls: {token!r}")
    letters = controls + target
    for ch in letters:
        if ch not in WIRES:
            raise FormatError(f"unknown wire {ch!r} in {token!r}")
        if WIRES.index(ch) >= n:
            raise FormatError(f"wire {ch!r} in {token!r} is beyond width {n}")
    if len(set(letters)) != len(letters):
        raise FormatError(f"repeated wire in {token!r}")
    return Gate.on(WIRES.index(target), (WIRES.index(ch) for ch in controls))


def format_gate(g: Gate) -> str:
    ctl = "".join(WIRES[c] for c in sorted(g.controls))
    tgt = WIRES[g.target]
    if g.kind is GateKind.NOT:
        return f"N{tgt}"
    if g.kind is GateKind.CNOT:
        return f"C{ctl}-{tgt}"
    if g.kind is GateKind.TOFFOLI3:
        return f"T{ctl}-{tgt}"
    return f"T4{ctl}-{tgt}"


def parse_circuit(text: str, n: int = 4) -> Circuit:
    """Parse whitespace-separated gate tokens.

    Angle brackets mark Peres groups in printed circuits; they carry no
    structure and are dropped, even when nested or unbalanced.
    """
    _check_width(n)
    tokens = text.replace("<", " ").replace(">", " ").split()
    return Circuit(n, tuple(parse_gate(tok, n) for tok in tokens))


def format_circuit(c: Circuit, peres_marks: bool = False) -> str:
    tokens = [format_gate(g) for g in c.gates]
    if peres_marks:
        from .cost import quantum_cost

        for i, j in quantum_cost(c).pairs:
            tokens[i] = "<" + tokens[i]
            tokens[j] = tokens[j] + ">"
    return " ".join(tokens)
