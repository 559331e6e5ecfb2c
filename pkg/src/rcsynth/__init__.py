"""Exact synthesis and quantum-cost minimization of small reversible circuits."""

from .core import (
    Circuit,
    FormatError,
    Gate,
    GateKind,
    Permutation,
    WidthError,
    apply_gate,
    circuit_to_perm,
    compose,
    format_circuit,
    format_gate,
    format_vector,
    gate_library,
    inverse,
    parse_circuit,
    parse_gate,
    parse_vector,
)
from .canonical import Relabeling, canonical_rep, class_members, relabel
from .cost import CostReport, quantum_cost
from .database import DatabaseError, OptimalDb
from .kernels import BACKEND
from .synthesis import (
    DistanceOracle,
    EnumerationReport,
    EnumerationRequest,
    HorizonError,
    enumerate_all,
    optimal_gc,
    qc_minimize,
    synthesize_one,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Circuit",
    "CostReport",
    "DatabaseError",
    "DistanceOracle",
    "EnumerationReport",
    "EnumerationRequest",
    "FormatError",
    "Gate",
    "GateKind",
    "HorizonError",
    "OptimalDb",
    "Permutation",
    "Relabeling",
    "WidthError",
    "apply_gate",
    "canonical_rep",
    "circuit_to_perm",
    "class_members",
    "compose",
    "enumerate_all",
    "format_circuit",
    "format_gate",
    "format_vector",
    "gate_library",
    "inverse",
    "optimal_gc",
    "parse_circuit",
    "parse_gate",
    "parse_vector",
    "qc_minimize",
    "quantum_cost",
    "relabel",
    "synthesize_one",
]
