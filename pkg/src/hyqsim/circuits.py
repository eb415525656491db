"""Circuit representation, state application, measurement and readout protocols.

Gate application contracts each gate's matrix with the state tensor over
the target wires only; full-register matrices are built only on request
(small systems, oracle checks).
"""

from __future__ import annotations

import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .gates import GateKind, GateParams, gate_matrix
from .hilbert import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    HybridState,
    Operator,
    RegisterLayout,
    WireSpec,
    embed,
    quadratures,
    qubit,
    qumode,
)

__all__ = [
    "GateInstance",
    "Circuit",
    "ObservableSpec",
    "apply",
    "expectation",
    "operator_expectation",
    "sample",
    "homodyne_via_circuit",
    "sideband_probability",
    "recover_fock_dist",
]

logger = logging.getLogger(__name__)

_NORM_DRIFT_TOL = 1e-12


@dataclass(frozen=True)
class GateInstance:
    """A gate kind with parameters bound to target wires.

    ``targets`` lists qubit wires first, then qumode wires, matching the
    gate's own tensor ordering.
    """

    kind: GateKind
    targets: tuple[int, ...]
    theta: float = 0.0
    phi: float = 0.0

    @property
    def params(self) -> GateParams:
        return GateParams(self.theta, self.phi)


class Circuit:
    """Ordered gate list over a fixed register layout.

    ``global_phase`` (radians) multiplies the state by ``exp(i*phase)`` on
    application; circuits generated from Hamiltonian term exponentials use
    it to stay exactly equal to the product of the term factors.
    """

    def __init__(self, layout: RegisterLayout, gates=(), global_phase: float = 0.0):
        self.layout = layout
        self.gates: list[GateInstance] = []
        self.global_phase = float(global_phase)
        for g in gates:
            self.append(g)

    def append(self, gate: GateInstance) -> None:
        kind = gate.kind
        if len(gate.targets) != kind.arity:
            raise ValueError(f"{kind.name} takes {kind.arity} targets, got {len(gate.targets)}")
        self.layout.check_wires(gate.targets)
        for i, t in enumerate(gate.targets):
            want_qubit = i < kind.n_qubits
            if self.layout.wires[t].is_qubit != want_qubit:
                expected = "qubit" if want_qubit else "qumode"
                raise ValueError(f"{kind.name} target {i} must be a {expected} wire, wire {t} is not")
        self.gates.append(gate)

    def add(self, kind: GateKind, targets, theta: float = 0.0, phi: float = 0.0) -> "Circuit":
        self.append(GateInstance(kind, tuple(targets), float(theta), float(phi)))
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def gate_dims(self, gate: GateInstance) -> tuple[int, ...]:
        return tuple(self.layout.wires[t].dim for t in gate.targets)

    def unitary(self) -> Operator:
        """Full-register matrix of the circuit (oracle use; small systems only)."""
        dim = self.layout.dim
        if dim > 4096:
            raise ValueError(f"full unitary of dimension {dim} refused; apply gates to a state instead")
        u = np.eye(dim, dtype=complex)
        for g in self.gates:
            mat = _cached_gate_matrix(g.kind, g.theta, g.phi, self.gate_dims(g))
            u = embed(Operator(mat, self.gate_dims(g)), g.targets, self.layout).matrix @ u
        return Operator(u * np.exp(1j * self.global_phase), self.layout.dims)

    # --- JSON interchange -------------------------------------------------

    def to_json_dict(self) -> dict:
        wires = []
        for w in self.layout.wires:
            wires.append({"kind": "qubit"} if w.is_qubit else {"kind": "qumode", "cutoff": w.cutoff})
        gates = []
        for g in self.gates:
            entry: dict = {"kind": g.kind.short, "targets": list(g.targets)}
            if g.kind.param_kind == "theta":
                entry["theta"] = g.theta
            elif g.kind.param_kind == "z":
                p = g.params.normalized()
                entry["theta"] = p.theta
                entry["phi"] = p.phi
            gates.append(entry)
        out = {"wires": wires, "gates": gates}
        if self.global_phase != 0.0:
            out["global_phase"] = self.global_phase
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)

    @classmethod
    def from_json_dict(cls, data: dict) -> "Circuit":
        wires = []
        for w in data["wires"]:
            if w["kind"] == "qubit":
                wires.append(qubit())
            elif w["kind"] == "qumode":
                wires.append(qumode(int(w["cutoff"])))
            else:
                raise ValueError(f"unknown wire kind {w['kind']!r}")
        circuit = cls(RegisterLayout(wires), global_phase=float(data.get("global_phase", 0.0)))
        for g in data["gates"]:
            kind = GateKind.from_short(g["kind"])
            circuit.add(kind, tuple(g["targets"]), float(g.get("theta", 0.0)), float(g.get("phi", 0.0)))
        return circuit

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_json_dict(json.loads(text))


@lru_cache(maxsize=4096)
def _cached_gate_matrix(kind: GateKind, theta: float, phi: float, dims: tuple[int, ...]) -> np.ndarray:
    return gate_matrix(kind, GateParams(theta, phi), dims)


def _apply_matrix_inplace(psi: np.ndarray, dims: tuple[int, ...], mat: np.ndarray,
                          targets: tuple[int, ...]) -> np.ndarray:
    """Contract ``mat`` (on ``targets``) with the state tensor, preserving axis order."""
    n = len(dims)
    tdims = tuple(dims[t] for t in targets)
    k = len(targets)
    psi_t = psi.reshape(dims)
    gate_t = mat.reshape(tdims + tdims)
    moved = np.tensordot(gate_t, psi_t, axes=(tuple(range(k, 2 * k)), targets))
    rest = [i for i in range(n) if i not in targets]
    perm = list(targets) + rest
    inv = np.argsort(perm)
    return moved.transpose(inv).reshape(-1)


def apply(circuit: Circuit, state: HybridState) -> HybridState:
    """Apply the circuit to ``state`` in place (and return it).

    Norm drift beyond 1e-12 is renormalized and logged; gates built from
    truncated-generator exponentials keep it near machine precision.
    """
    if state.layout != circuit.layout:
        raise ValueError("circuit layout does not match state layout")
    psi = state.amplitudes
    dims = circuit.layout.dims
    for g in circuit.gates:
        mat = _cached_gate_matrix(g.kind, g.theta, g.phi, circuit.gate_dims(g))
        psi = _apply_matrix_inplace(psi, dims, mat, g.targets)
    if circuit.global_phase != 0.0:
        psi = psi * np.exp(1j * circuit.global_phase)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > _NORM_DRIFT_TOL:
        logger.warning("renormalizing state after norm drift of %.3e", abs(norm - 1.0))
        psi = psi / norm
    state.amplitudes = psi
    return state


# --- Observables ----------------------------------------------------------

_QUBIT_FACTORS = {"sx", "sy", "sz", "n"}
_QUMODE_FACTORS = {"n", "x", "p"}


@dataclass(frozen=True)
class ObservableSpec:
    """Hermitian observable: sum of real-coefficient products of wire factors.

    Factor names: ``sx, sy, sz`` (qubit Paulis), ``n`` (excitation number,
    valid on both wire kinds; on a qubit it is ``(I + sigma_z)/2``),
    ``x, p`` (qumode quadratures).  Identity factors are implicit.
    """

    terms: tuple[tuple[float, tuple[tuple[int, str], ...]], ...]

    def __init__(self, terms):
        canon = []
        for coeff, factors in terms:
            if isinstance(coeff, complex):
                if abs(coeff.imag) > 1e-14:
                    raise ValueError("observable coefficients must be real (Hermiticity)")
                coeff = coeff.real
            factors = tuple((int(w), str(name)) for w, name in factors)
            wires = [w for w, _ in factors]
            if len(set(wires)) != len(wires):
                raise ValueError("factors within a term must target distinct wires")
            canon.append((float(coeff), factors))
        object.__setattr__(self, "terms", tuple(canon))

    @classmethod
    def single(cls, wire: int, name: str, coeff: float = 1.0) -> "ObservableSpec":
        return cls([(coeff, ((wire, name),))])

    def __add__(self, other: "ObservableSpec") -> "ObservableSpec":
        return ObservableSpec(self.terms + other.terms)

    def scaled(self, factor: float) -> "ObservableSpec":
        return ObservableSpec([(factor * c, f) for c, f in self.terms])

    def to_operator(self, layout: RegisterLayout) -> Operator:
        """Dense matrix of the observable (oracle use)."""
        mat = np.zeros((layout.dim, layout.dim), dtype=complex)
        for coeff, factors in self.terms:
            term = np.eye(layout.dim, dtype=complex)
            for wire, name in factors:
                local = _factor_matrix(name, layout.wires[wire])
                term = term @ embed(Operator(local, (layout.wires[wire].dim,)), (wire,), layout).matrix
            mat += coeff * term
        return Operator(mat, layout.dims)


def _factor_matrix(name: str, wire: WireSpec) -> np.ndarray:
    if wire.is_qubit:
        if name not in _QUBIT_FACTORS:
            raise ValueError(f"factor {name!r} is not valid on a qubit wire")
        if name == "sx":
            return SIGMA_X
        if name == "sy":
            return SIGMA_Y
        if name == "sz":
            return SIGMA_Z
        return np.diag([1.0, 0.0]).astype(complex)  # sigma+ sigma- = (I + sigma_z)/2
    if name not in _QUMODE_FACTORS:
        raise ValueError(f"factor {name!r} is not valid on a qumode wire")
    cutoff = wire.cutoff
    if name == "n":
        return np.diag(np.arange(cutoff + 1, dtype=float)).astype(complex)
    x, p = quadratures(cutoff)
    return x.matrix if name == "x" else p.matrix


def expectation(state: HybridState, obs: ObservableSpec) -> float:
    """<psi|O|psi>; the imaginary residue is checked (< 1e-10) and discarded."""
    layout = state.layout
    psi = state.amplitudes
    dims = layout.dims
    acc = 0.0 + 0.0j
    for coeff, factors in obs.terms:
        phi = psi
        for wire, name in factors:
            mat = _factor_matrix(name, layout.wires[wire])
            phi = _apply_matrix_inplace(phi, dims, mat, (wire,))
        acc += coeff * np.vdot(psi, phi)
    if abs(acc.imag) > 1e-10:
        raise ValueError(f"non-Hermitian expectation residue {acc.imag:.3e}")
    return float(acc.real)


def operator_expectation(state: HybridState, op: Operator | np.ndarray) -> float:
    """<psi|A|psi> for a dense Hermitian operator on the full register."""
    mat = op.matrix if isinstance(op, Operator) else np.asarray(op)
    val = np.vdot(state.amplitudes, mat @ state.amplitudes)
    if abs(val.imag) > 1e-8 * max(1.0, abs(val.real)):
        raise ValueError(f"non-Hermitian expectation residue {val.imag:.3e}")
    return float(val.real)


# --- Sampling ---------------------------------------------------------------

def marginal_probabilities(state: HybridState, wires) -> np.ndarray:
    """Joint probabilities of the given wires (axes ordered as ``wires``)."""
    wires = tuple(wires)
    state.layout.check_wires(wires)
    probs = np.abs(state.tensor()) ** 2
    other = tuple(i for i in range(state.layout.n_wires) if i not in wires)
    if other:
        probs = probs.sum(axis=other)
    # probs axes are the kept wires in ascending order; reorder to `wires`.
    kept_sorted = tuple(sorted(wires))
    perm = [kept_sorted.index(w) for w in wires]
    return probs.transpose(perm)


def sample(state: HybridState, wires, shots: int, seed: int) -> dict[tuple[int, ...], int]:
    """Projective computational/Fock-basis measurement of the given wires.

    Returns outcome-tuple -> count; fully determined by ``seed``.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    wires = tuple(wires)
    probs = marginal_probabilities(state, wires)
    flat = probs.reshape(-1)
    flat = flat / flat.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(flat.size, size=shots, p=flat)
    values, counts = np.unique(draws, return_counts=True)
    shape = probs.shape
    return {tuple(int(v) for v in np.unravel_index(val, shape)): int(c)
            for val, c in zip(values, counts)}


# --- Homodyne via ancilla circuit -------------------------------------------

def homodyne_via_circuit(state: HybridState, mode_wire: int, quadrature: str,
                         ancilla_cutoff: int | None = None) -> float:
    """Quadrature expectation via the ancilla-mode interference protocol.

    Appends an ancilla qumode in vacuum, displaces it by 1/sqrt(2), rotates
    it by 0 (``x``) or pi/2 (``p``), interferes it with the target on a
    50-50 beam splitter, and returns the occupation difference
    <N_target> - <N_ancilla>, which equals <X> (or <P>) of the original
    target mode.
    """
    if quadrature not in ("x", "p"):
        raise ValueError("quadrature must be 'x' or 'p'")
    layout = state.layout
    layout.check_wires((mode_wire,))
    spec = layout.wires[mode_wire]
    if spec.is_qubit:
        raise ValueError("homodyne target must be a qumode wire")
    cutoff = spec.cutoff
    anc_cutoff = ancilla_cutoff if ancilla_cutoff is not None else cutoff

    occ = marginal_probabilities(state, (mode_wire,))
    tail = float(occ[max(0, cutoff - 1):].sum())
    if tail > 1e-12:
        warnings.warn(
            f"homodyne target has probability {tail:.2e} within two levels of the cutoff; "
            "result may be truncation-limited", stacklevel=2)

    ext_layout = RegisterLayout(layout.wires + (qumode(anc_cutoff),))
    anc = layout.n_wires
    vac = np.zeros(anc_cutoff + 1, dtype=complex)
    vac[0] = 1.0
    ext = HybridState(ext_layout, np.kron(state.amplitudes, vac))

    circ = Circuit(ext_layout)
    circ.add(GateKind.Displacement, (anc,), theta=1.0 / math.sqrt(2.0), phi=0.0)
    if quadrature == "p":
        circ.add(GateKind.ModeRotation, (anc,), theta=math.pi / 2.0)
    circ.add(GateKind.BeamSplitter, (mode_wire, anc), theta=math.pi / 4.0, phi=0.0)
    apply(circ, ext)

    n_target = expectation(ext, ObservableSpec.single(mode_wire, "n"))
    n_anc = expectation(ext, ObservableSpec.single(anc, "n"))
    return n_target - n_anc


# --- Sideband phonon-number readout ------------------------------------------

def sideband_probability(p_fock: np.ndarray, rabi: float, lamb_dicke: float,
                         times: np.ndarray) -> np.ndarray:
    """Qubit |down> probability under a blue-sideband drive.

    ``P_down(t) = (1 + sum_n P_n cos(2 Omega_{n,n+1} t)) / 2`` with the
    Lamb-Dicke sideband Rabi frequencies Omega_{n,n+1} = rabi * eta * sqrt(n+1).
    """
    p_fock = np.asarray(p_fock, dtype=float)
    if abs(p_fock.sum() - 1.0) > 1e-8 or (p_fock < -1e-12).any():
        raise ValueError("Fock distribution must be normalized and non-negative")
    times = np.asarray(times, dtype=float)
    freqs = 2.0 * rabi * lamb_dicke * np.sqrt(np.arange(1, p_fock.size + 1))
    return 0.5 * (1.0 + np.cos(np.outer(times, freqs)) @ p_fock)


def recover_fock_dist(p_down: np.ndarray, times: np.ndarray, rabi: float,
                      lamb_dicke: float, n_max: int) -> np.ndarray:
    """Least-squares inversion of the sideband signal on the known frequency set."""
    times = np.asarray(times, dtype=float)
    signal = 2.0 * np.asarray(p_down, dtype=float) - 1.0
    freqs = 2.0 * rabi * lamb_dicke * np.sqrt(np.arange(1, n_max + 2))
    design = np.cos(np.outer(times, freqs))
    coeffs, *_ = np.linalg.lstsq(design, signal, rcond=None)
    return coeffs
