"""Gate count and quantum cost with Peres grouping."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import Circuit, Gate, GateKind

GATE_QC = {GateKind.NOT: 1, GateKind.CNOT: 1, GateKind.TOFFOLI3: 5, GateKind.TOFFOLI4: 13}
PERES_QC = 4
# a Toffoli (5) and a CNOT (1) grouped into a Peres gate (4)
PERES_SAVING = GATE_QC[GateKind.TOFFOLI3] + GATE_QC[GateKind.CNOT] - PERES_QC


@dataclass(frozen=True)
class CostReport:
    gc: int
    qc: int
    raw_qc: int
    pairs: tuple[tuple[int, int], ...]


def gate_qc(g: Gate) -> int:
    return GATE_QC[g.kind]


def peres_pairable(g1: Gate, g2: Gate) -> bool:
    """True for Txy-z next to Cx-y (either order), i.e. a Peres or inverted Peres gate."""
    if g1.kind is GateKind.CNOT and g2.kind is GateKind.TOFFOLI3:
        g1, g2 = g2, g1
    if g1.kind is not GateKind.TOFFOLI3 or g2.kind is not GateKind.CNOT:
        return False
    return frozenset((g2.target, *g2.controls)) == g1.controls


def peres_pairs(gates: Sequence[Gate]) -> tuple[tuple[int, int], ...]:
    """Maximum set of disjoint adjacent pairable gates, leftmost pairs preferred.

    ``best[i]`` is the most pairs available in ``gates[i:]``; a pair starting at
    ``i`` is taken whenever it does not lose against skipping ``i``.
    """
    k = len(gates)
    best = [0] * (k + 2)
    for i in range(k - 2, -1, -1):
        skip = best[i + 1]
        take = 1 + best[i + 2] if peres_pairable(gates[i], gates[i + 1]) else -1
        best[i] = max(skip, take)
    pairs = []
    i = 0
    while i < k - 1:
        if peres_pairable(gates[i], gates[i + 1]) and 1 + best[i + 2] >= best[i + 1]:
            pairs.append((i, i + 1))
            i += 2
        else:
            i += 1
    return tuple(pairs)


def quantum_cost(c: Circuit) -> CostReport:
    raw = sum(gate_qc(g) for g in c.gates)
    pairs = peres_pairs(c.gates)
    return CostReport(len(c.gates), raw - PERES_SAVING * len(pairs), raw, pairs)


def gate_count(c: Circuit) -> int:
    """Peres groups still count as two gates."""
    return len(c.gates)
