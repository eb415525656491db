"""Hybrid qubit-qumode circuit simulation and trapped-ion gate planning."""

__version__ = "0.1.0"

from .hilbert import (
    HybridState,
    Operator,
    RegisterLayout,
    WireKind,
    WireSpec,
    qubit,
    qumode,
)
from .gates import GateKind, GateParams
from .circuits import Circuit, GateInstance, ObservableSpec

__all__ = [
    "__version__",
    "HybridState",
    "Operator",
    "RegisterLayout",
    "WireKind",
    "WireSpec",
    "qubit",
    "qumode",
    "GateKind",
    "GateParams",
    "Circuit",
    "GateInstance",
    "ObservableSpec",
]
