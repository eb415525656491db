"""Gate constructors for qubit, qumode and hybrid gates on truncated spaces.

Every parametrized gate is the exponential of its generator truncated to
the finite Fock space, so each returned matrix is exactly unitary there.
Complex-parameter gates follow the convention ``z = theta * exp(i*phi)``
with ``theta >= 0`` and ``phi in [0, 2*pi)``; real-angle gates (rotations,
Kerr, cross-Kerr) take a plain signed angle and ignore ``phi`` beyond an
optional sign flip (``phi = pi`` negates the angle).

Conventions baked in here:

* ``Rz(theta) = exp(+i theta sigma_z / 2)`` (note the plus sign).
* CNOT comes from ``exp(i pi/4 (I - sigma_z)_ctl (I - sigma_x)_tgt)``:
  the control-active state is ``|down>`` (the -1 eigenstate of sigma_z).
* Multi-wire gate matrices order their targets first-slowest; hybrid
  gates put the qubit first, then the mode(s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .hilbert import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    Operator,
    expm_antihermitian,
    ladder_ops,
)

__all__ = [
    "GateKind",
    "GateParams",
    "conserves_total_number",
    "qubit_gate",
    "qumode_gate",
    "two_qumode_gate",
    "hybrid_gate",
    "gate_matrix",
    "gate_generator",
]


class GateKind(Enum):
    """All supported gate kinds with (short name, #qubit wires, #qumode wires, param kind)."""

    PauliX = ("X", 1, 0, "none")
    PauliY = ("Y", 1, 0, "none")
    PauliZ = ("Z", 1, 0, "none")
    Rx = ("Rx", 1, 0, "theta")
    Ry = ("Ry", 1, 0, "theta")
    Rz = ("Rz", 1, 0, "theta")
    CNOT = ("CNOT", 2, 0, "none")
    ModeRotation = ("R", 0, 1, "theta")
    Displacement = ("D", 0, 1, "z")
    Squeeze = ("S", 0, 1, "z")
    BeamSplitter = ("BS", 0, 2, "z")
    Kerr = ("K", 0, 1, "theta")
    CrossKerr = ("CK", 0, 2, "theta")
    RSB = ("RSB", 1, 1, "z")
    BSB = ("BSB", 1, 1, "z")
    CtrlRotation = ("CR", 1, 1, "theta")
    CtrlDisplacement = ("CD", 1, 1, "z")
    CtrlSqueeze = ("CS", 1, 1, "z")
    CtrlBeamSplitter = ("CBS", 1, 2, "z")

    def __init__(self, short: str, n_qubits: int, n_qumodes: int, param_kind: str):
        self.short = short
        self.n_qubits = n_qubits
        self.n_qumodes = n_qumodes
        self.param_kind = param_kind

    @property
    def arity(self) -> int:
        return self.n_qubits + self.n_qumodes

    @classmethod
    def from_short(cls, short: str) -> "GateKind":
        for kind in cls:
            if kind.short == short:
                return kind
        raise ValueError(f"unknown gate kind {short!r}")


_NUMBER_CONSERVING = {
    GateKind.PauliZ, GateKind.Rz, GateKind.ModeRotation, GateKind.Kerr,
    GateKind.CrossKerr, GateKind.BeamSplitter, GateKind.RSB, GateKind.BSB,
    GateKind.CtrlRotation,
}


def conserves_total_number(kind: GateKind) -> bool:
    """True if the gate commutes with the total excitation number operator."""
    return kind in _NUMBER_CONSERVING


@dataclass(frozen=True)
class GateParams:
    """Gate parameters: a signed angle, or (theta, phi) encoding z = theta e^{i phi}."""

    theta: float = 0.0
    phi: float = 0.0

    def normalized(self) -> "GateParams":
        """Canonical z-form: theta >= 0, phi in [0, 2*pi)."""
        theta, phi = self.theta, self.phi
        if theta < 0:
            theta, phi = -theta, phi + math.pi
        return GateParams(theta, phi % (2.0 * math.pi))

    @property
    def z(self) -> complex:
        return self.theta * np.exp(1j * self.phi)


def _signed_angle(params: GateParams) -> float:
    """Signed angle for real-parameter gates; phi enters only as a sign."""
    return params.theta if math.cos(params.phi) >= 0.0 else -params.theta


def _check_cutoff(cutoff: int) -> int:
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    return cutoff + 1


def gate_generator(kind: GateKind, params: GateParams, dims: tuple[int, ...]) -> np.ndarray:
    """Anti-Hermitian generator G such that the gate equals exp(G).

    ``dims`` are the local dimensions of the gate's targets in gate order.
    Raises for the non-exponential kinds (Paulis, CNOT).
    """
    z = params.z
    theta = _signed_angle(params)
    if kind is GateKind.Rx:
        return 0.5j * theta * SIGMA_X
    if kind is GateKind.Ry:
        return 0.5j * theta * SIGMA_Y
    if kind is GateKind.Rz:
        return 0.5j * theta * SIGMA_Z
    if kind is GateKind.ModeRotation:
        return 1j * theta * np.diag(np.arange(dims[0])).astype(complex)
    if kind is GateKind.Kerr:
        return 1j * theta * np.diag(np.arange(dims[0]) ** 2).astype(complex)
    if kind is GateKind.Displacement:
        a, a_dag, _ = ladder_ops(dims[0] - 1)
        return z * a_dag.matrix - np.conj(z) * a.matrix
    if kind is GateKind.Squeeze:
        a, a_dag, _ = ladder_ops(dims[0] - 1)
        return 0.5 * (np.conj(z) * (a.matrix @ a.matrix) - z * (a_dag.matrix @ a_dag.matrix))
    if kind is GateKind.BeamSplitter:
        aa, aa_dag, _ = ladder_ops(dims[0] - 1)
        bb, bb_dag, _ = ladder_ops(dims[1] - 1)
        return z * np.kron(aa_dag.matrix, bb.matrix) - np.conj(z) * np.kron(aa.matrix, bb_dag.matrix)
    if kind is GateKind.CrossKerr:
        prod = np.kron(np.arange(dims[0]), np.ones(dims[1])) * np.kron(np.ones(dims[0]), np.arange(dims[1]))
        return 1j * theta * np.diag(prod).astype(complex)
    if kind is GateKind.RSB:
        a, a_dag, _ = ladder_ops(dims[1] - 1)
        return 1j * z * np.kron(SIGMA_PLUS, a.matrix) + 1j * np.conj(z) * np.kron(SIGMA_MINUS, a_dag.matrix)
    if kind is GateKind.BSB:
        a, a_dag, _ = ladder_ops(dims[1] - 1)
        return 1j * z * np.kron(SIGMA_PLUS, a_dag.matrix) + 1j * np.conj(z) * np.kron(SIGMA_MINUS, a.matrix)
    if kind is GateKind.CtrlRotation:
        n = np.arange(dims[1])
        return 1j * theta * np.kron(np.diag([1.0, -1.0]), np.diag(n)).astype(complex)
    if kind is GateKind.CtrlDisplacement:
        a, a_dag, _ = ladder_ops(dims[1] - 1)
        return np.kron(SIGMA_Z, z * a_dag.matrix - np.conj(z) * a.matrix)
    if kind is GateKind.CtrlSqueeze:
        a, a_dag, _ = ladder_ops(dims[1] - 1)
        loc = 0.5 * (np.conj(z) * (a.matrix @ a.matrix) - z * (a_dag.matrix @ a_dag.matrix))
        return np.kron(SIGMA_Z, loc)
    if kind is GateKind.CtrlBeamSplitter:
        aa, aa_dag, _ = ladder_ops(dims[1] - 1)
        bb, bb_dag, _ = ladder_ops(dims[2] - 1)
        loc = z * np.kron(aa_dag.matrix, bb.matrix) - np.conj(z) * np.kron(aa.matrix, bb_dag.matrix)
        return np.kron(SIGMA_Z, loc)
    raise ValueError(f"{kind.name} has no exponential generator")


def gate_matrix(kind: GateKind, params: GateParams, dims: tuple[int, ...]) -> np.ndarray:
    """Unitary matrix of the gate on its target dims (first target slowest).

    Diagonal kinds (R, K, CK, CR, Rz) are built in closed form; the rest
    exponentiate their truncated generator.
    """
    theta = _signed_angle(params)
    if kind is GateKind.PauliX:
        return SIGMA_X.copy()
    if kind is GateKind.PauliY:
        return SIGMA_Y.copy()
    if kind is GateKind.PauliZ:
        return SIGMA_Z.copy()
    if kind is GateKind.Rx:
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return np.array([[c, 1j * s], [1j * s, c]], dtype=complex)
    if kind is GateKind.Ry:
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return np.array([[c, s], [-s, c]], dtype=complex)
    if kind is GateKind.Rz:
        return np.diag([np.exp(0.5j * theta), np.exp(-0.5j * theta)])
    if kind is GateKind.CNOT:
        u = np.eye(4, dtype=complex)
        u[2:, 2:] = SIGMA_X
        return u
    if kind is GateKind.ModeRotation:
        return np.diag(np.exp(1j * theta * np.arange(dims[0])))
    if kind is GateKind.Kerr:
        return np.diag(np.exp(1j * theta * np.arange(dims[0]) ** 2))
    if kind is GateKind.CrossKerr:
        prod = np.kron(np.arange(dims[0]), np.ones(dims[1])) * np.kron(np.ones(dims[0]), np.arange(dims[1]))
        return np.diag(np.exp(1j * theta * prod))
    if kind is GateKind.CtrlRotation:
        n = np.arange(dims[1])
        return np.diag(np.concatenate([np.exp(1j * theta * n), np.exp(-1j * theta * n)]))
    return expm_antihermitian(gate_generator(kind, params, dims)).matrix


def _coerce_params(kind: GateKind, params: GateParams | complex | float) -> GateParams:
    if isinstance(params, GateParams):
        return params.normalized() if kind.param_kind == "z" else params
    if isinstance(params, complex) and params.imag != 0.0:
        if kind.param_kind != "z":
            raise ValueError(f"{kind.name} takes a real angle")
        return GateParams(abs(params), math.atan2(params.imag, params.real)).normalized()
    theta = float(np.real(params))
    if kind.param_kind == "z":
        return GateParams(theta, 0.0).normalized()
    return GateParams(theta, 0.0)


def qubit_gate(kind: GateKind, theta: float | None = None) -> Operator:
    """Single- or two-qubit gate from the fixed gate set."""
    if kind.n_qumodes != 0 or kind.n_qubits not in (1, 2):
        raise ValueError(f"{kind.name} is not a qubit gate")
    if kind.param_kind == "theta" and theta is None:
        raise ValueError(f"{kind.name} requires a rotation angle")
    dims = (2,) * kind.n_qubits
    params = _coerce_params(kind, theta if theta is not None else 0.0)
    return Operator(gate_matrix(kind, params, dims), dims)


def qumode_gate(kind: GateKind, params: GateParams | complex | float, cutoff: int) -> Operator:
    """Single-qumode gate on a space truncated at ``cutoff``."""
    if kind.n_qumodes != 1 or kind.n_qubits != 0:
        raise ValueError(f"{kind.name} is not a single-qumode gate")
    d = _check_cutoff(cutoff)
    return Operator(gate_matrix(kind, _coerce_params(kind, params), (d,)), (d,))


def two_qumode_gate(kind: GateKind, params: GateParams | complex | float,
                    cutoff_a: int, cutoff_b: int) -> Operator:
    """Two-qumode gate; the first mode is the slower tensor index."""
    if kind.n_qumodes != 2 or kind.n_qubits != 0:
        raise ValueError(f"{kind.name} is not a two-qumode gate")
    da, db = _check_cutoff(cutoff_a), _check_cutoff(cutoff_b)
    return Operator(gate_matrix(kind, _coerce_params(kind, params), (da, db)), (da, db))


def hybrid_gate(kind: GateKind, params: GateParams | complex | float, cutoff: int,
                cutoff_b: int | None = None) -> Operator:
    """Qubit-qumode gate; qubit is the slowest index, then the mode(s)."""
    if kind.n_qubits != 1 or kind.n_qumodes == 0:
        raise ValueError(f"{kind.name} is not a hybrid gate")
    d = _check_cutoff(cutoff)
    if kind.n_qumodes == 2:
        db = _check_cutoff(cutoff_b if cutoff_b is not None else cutoff)
        dims: tuple[int, ...] = (2, d, db)
    else:
        dims = (2, d)
    return Operator(gate_matrix(kind, _coerce_params(kind, params), dims), dims)
