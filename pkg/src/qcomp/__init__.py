"""State-vector quantum circuit simulation with information-theory, algorithm,
error-correction and key-distribution demonstrations."""

from .errors import DomainError, ParseError, ResourceError
from .qstate import (
    DensityMatrix,
    MeasurementRecord,
    StateVector,
    basis_state,
    inner_product,
    measure_all,
    measure_qubit,
    partial_trace,
    purity,
    to_density,
)
from .gates import Gate, GateParams, apply
from .circuit import Circuit, CircuitOp, inverse, parse, render, run, unitary_of

__version__ = "0.1.0"

__all__ = [
    "Circuit", "CircuitOp", "DensityMatrix", "DomainError", "Gate", "GateParams",
    "MeasurementRecord", "ParseError", "ResourceError", "StateVector", "apply", "basis_state",
    "inner_product", "inverse", "measure_all", "measure_qubit", "parse", "partial_trace",
    "purity", "render", "run", "to_density", "unitary_of",
]
