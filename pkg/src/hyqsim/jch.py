"""Jaynes-Cummings-Hubbard lattice: Hamiltonian, Trotter circuits, evolution.

The model is a 1-D open chain of M sites, each carrying one qumode
(energy ``omega_c``, truncated at ``cutoff``) and one qubit (energy
``omega_a = omega_c - delta``), with nearest-neighbor mode hopping
``-kappa (a_{n+1}^dag a_n + h.c.)`` and on-site exchange coupling
``eta (a_n sigma_n^+ + a_n^dag sigma_n^-)``.

Register convention: all qumodes first (wires ``0..M-1``), then all
qubits (wires ``M..2M-1``), so kets read ``|m_1..m_M> (x) |b_1..b_M>``.
Site ``n`` pairs mode wire ``n`` with qubit wire ``M + n``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, HybridState, ObservableSpec, apply, expectation
from .gates import GateKind
from .hilbert import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    Operator,
    RegisterLayout,
    embed,
    ladder_ops,
    quadratures,
    qubit,
    qumode,
)

__all__ = [
    "JchParams",
    "EvolutionRecord",
    "jch_layout",
    "initial_state",
    "build_hamiltonian",
    "total_number_operator",
    "total_number_spec",
    "trotter_step",
    "evolve",
    "exact_evolve",
]

EXACT_EVOLVE_DIM_LIMIT = 20000
HAMILTONIAN_DIM_LIMIT = 20000


@dataclass(frozen=True)
class JchParams:
    """Model parameters; exactly one of ``omega_a`` / ``delta`` is derived."""

    n_sites: int
    omega_c: float = 1.0
    delta: float | None = None
    omega_a: float | None = None
    kappa: float = 0.0
    eta: float = 0.0
    cutoff: int = 4

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")
        if (self.delta is None) == (self.omega_a is None):
            raise ValueError("specify exactly one of delta or omega_a")
        if self.omega_a is None:
            object.__setattr__(self, "omega_a", self.omega_c - self.delta)
        else:
            object.__setattr__(self, "delta", self.omega_c - self.omega_a)

    @classmethod
    def from_dict(cls, data: dict) -> "JchParams":
        return cls(
            n_sites=int(data["M"]),
            omega_c=float(data.get("omega_c", 1.0)),
            delta=float(data["delta"]) if "delta" in data else None,
            omega_a=float(data["omega_a"]) if "omega_a" in data else None,
            kappa=float(data.get("kappa", 0.0)),
            eta=float(data.get("eta", 0.0)),
            cutoff=int(data.get("cutoff", 4)),
        )


def jch_layout(params: JchParams) -> RegisterLayout:
    """M qumode wires followed by M qubit wires."""
    m = params.n_sites
    return RegisterLayout([qumode(params.cutoff)] * m + [qubit()] * m)


def initial_state(params: JchParams, modes, qubits) -> HybridState:
    """Product basis state |modes> (x) |qubits>.

    ``qubits`` is a string over ``u`` (up, one excitation) / ``d`` (down),
    or an iterable of basis indices (0 = up).
    """
    layout = jch_layout(params)
    modes = list(modes)
    if isinstance(qubits, str):
        try:
            bits = [{"u": 0, "d": 1}[c] for c in qubits.lower()]
        except KeyError as exc:
            raise ValueError("qubit string must contain only 'u'/'d'") from exc
    else:
        bits = list(qubits)
    if len(modes) != params.n_sites or len(bits) != params.n_sites:
        raise ValueError("one mode occupation and one qubit state per site required")
    return layout.basis_state(modes + bits)


def _site_ops(params: JchParams):
    a, a_dag, n = ladder_ops(params.cutoff)
    return a.matrix, a_dag.matrix, n.matrix


def build_hamiltonian(params: JchParams, form: str = "ladder") -> Operator:
    """Dense Hamiltonian in ladder or quadrature form.

    Both forms are algebraically identical term by term (also under
    truncation, since cross-wire factors commute exactly), which the test
    suite checks at the 1e-10 level.
    """
    if form not in ("ladder", "quadrature"):
        raise ValueError("form must be 'ladder' or 'quadrature'")
    layout = jch_layout(params)
    if layout.dim > HAMILTONIAN_DIM_LIMIT:
        raise ValueError(f"register dimension {layout.dim} exceeds dense-Hamiltonian limit")
    m = params.n_sites
    dim = layout.dim
    h = np.zeros((dim, dim), dtype=complex)
    a, a_dag, n_op = _site_ops(params)
    d = params.cutoff + 1

    def emb(mat, wires):
        return embed(Operator(mat, tuple(layout.wires[w].dim for w in wires)), wires, layout).matrix

    if form == "ladder":
        n_qubit = SIGMA_PLUS @ SIGMA_MINUS
        for site in range(m):
            h += params.omega_c * emb(n_op, (site,))
            h += params.omega_a * emb(n_qubit, (m + site,))
            coupling = np.kron(SIGMA_PLUS, a) + np.kron(SIGMA_MINUS, a_dag)
            h += params.eta * emb(coupling, (m + site, site))
        for site in range(m - 1):
            hop = np.kron(a, a_dag) + np.kron(a_dag, a)  # a_n a_{n+1}^dag + a_n^dag a_{n+1}
            h += -params.kappa * emb(hop, (site, site + 1))
        return Operator(h, layout.dims)

    x, p = (op.matrix for op in quadratures(params.cutoff))
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    for site in range(m):
        h += params.omega_c * emb(n_op, (site,))
        h += params.omega_a * 0.5 * (emb(np.eye(2, dtype=complex), (m + site,)) + emb(SIGMA_Z, (m + site,)))
        h += params.eta / math.sqrt(2.0) * (
            emb(np.kron(sx, x), (m + site, site)) - emb(np.kron(sy, p), (m + site, site)))
    for site in range(m - 1):
        h += -params.kappa * (emb(np.kron(x, x), (site, site + 1))
                              + emb(np.kron(p, p), (site, site + 1)))
    return Operator(h, layout.dims)


def total_number_diagonal(layout: RegisterLayout) -> np.ndarray:
    """Diagonal of the total excitation number operator (modes + up-qubits)."""
    diag = np.zeros(layout.dims)
    for w, spec in enumerate(layout.wires):
        if spec.is_qubit:
            local = np.array([1.0, 0.0])  # |up> carries one excitation
        else:
            local = np.arange(spec.cutoff + 1, dtype=float)
        shape = [1] * layout.n_wires
        shape[w] = spec.dim
        diag = diag + local.reshape(shape)
    return diag.reshape(-1)


def total_number_operator(layout: RegisterLayout) -> Operator:
    """N_tot = sum_n (N_n^mode + N_n^qubit); diagonal with integer spectrum."""
    return Operator(np.diag(total_number_diagonal(layout)).astype(complex), layout.dims)


def total_number_spec(layout: RegisterLayout) -> ObservableSpec:
    return ObservableSpec([(1.0, ((w, "n"),)) for w in range(layout.n_wires)])


def trotter_step(params: JchParams, dt: float) -> Circuit:
    """One first-order Trotter step of exp(-i dt H) as a gate circuit.

    Per site: mode rotation R(-omega_c dt), qubit Rz(-omega_a dt) (plus the
    scalar phase from the identity half of the qubit number operator,
    tracked in ``global_phase``), then all RSB(eta dt, phi=pi), then the
    bond beam splitters BS(kappa dt, phi=pi/2) on even bonds, then odd.
    The produced circuit equals the product of the term exponentials
    exactly, not just up to phase.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    layout = jch_layout(params)
    circ = Circuit(layout)
    m = params.n_sites
    for site in range(m):
        if params.omega_c != 0.0:
            circ.add(GateKind.ModeRotation, (site,), theta=-params.omega_c * dt)
        if params.omega_a != 0.0:
            circ.add(GateKind.Rz, (m + site,), theta=-params.omega_a * dt)
            circ.global_phase += -0.5 * params.omega_a * dt
    for site in range(m):
        if params.eta != 0.0:
            circ.add(GateKind.RSB, (m + site, site), theta=params.eta * dt, phi=math.pi)
    for start in (0, 1):  # even bonds, then odd bonds
        for site in range(start, m - 1, 2):
            if params.kappa != 0.0:
                circ.add(GateKind.BeamSplitter, (site, site + 1),
                         theta=params.kappa * dt, phi=math.pi / 2.0)
    return circ


@dataclass
class EvolutionRecord:
    """Observable time series from a Trotterized run (row 0 is the initial state)."""

    times: np.ndarray
    mode_occupation: np.ndarray   # (steps+1, M)
    qubit_occupation: np.ndarray  # (steps+1, M)
    n_total: np.ndarray           # (steps+1,)
    entropy: np.ndarray | None = None
    entropy_method: str | None = None

    @property
    def n_sites(self) -> int:
        return self.mode_occupation.shape[1]

    def to_rows(self) -> list[dict]:
        rows = []
        for i, t in enumerate(self.times):
            row = {"time": float(t)}
            for s in range(self.n_sites):
                row[f"mode_{s + 1}"] = float(self.mode_occupation[i, s])
            for s in range(self.n_sites):
                row[f"qubit_{s + 1}"] = float(self.qubit_occupation[i, s])
            row["n_total"] = float(self.n_total[i])
            if self.entropy is not None:
                row[f"entropy_{self.entropy_method}"] = float(self.entropy[i])
            rows.append(row)
        return rows

    def to_json_dict(self) -> dict:
        out = {
            "times": self.times.tolist(),
            "mode_occupation": self.mode_occupation.tolist(),
            "qubit_occupation": self.qubit_occupation.tolist(),
            "n_total": self.n_total.tolist(),
        }
        if self.entropy is not None:
            out["entropy"] = self.entropy.tolist()
            out["entropy_method"] = self.entropy_method
        return out


def evolve(state0: HybridState, params: JchParams, dt: float, steps: int,
           entropy: str | None = None) -> EvolutionRecord:
    """Apply Trotter steps repeatedly, recording occupations each step.

    ``entropy``: None, ``shannon`` or ``von_neumann`` (qubit-register
    entropy, appended to the record).
    """
    layout = jch_layout(params)
    if state0.layout != layout:
        raise ValueError("initial state does not match the model layout")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    m = params.n_sites
    mode_specs = [ObservableSpec.single(s, "n") for s in range(m)]
    qubit_specs = [ObservableSpec.single(m + s, "n") for s in range(m)]

    if entropy is not None:
        from .phasespace import qubit_register_entropy  # local import avoids cycle

    state = state0.copy()
    circ = trotter_step(params, dt) if steps > 0 else None
    times = np.arange(steps + 1) * dt
    mode_occ = np.empty((steps + 1, m))
    qubit_occ = np.empty((steps + 1, m))
    ent = np.empty(steps + 1) if entropy is not None else None

    for k in range(steps + 1):
        if k > 0:
            apply(circ, state)
        for s in range(m):
            mode_occ[k, s] = expectation(state, mode_specs[s])
            qubit_occ[k, s] = expectation(state, qubit_specs[s])
        if ent is not None:
            ent[k] = qubit_register_entropy(state, method=entropy)
    n_total = mode_occ.sum(axis=1) + qubit_occ.sum(axis=1)
    return EvolutionRecord(times, mode_occ, qubit_occ, n_total, ent, entropy)


def exact_evolve(state0: HybridState, hamiltonian: Operator | np.ndarray, t: float) -> HybridState:
    """exp(-i H t)|psi0> by eigendecomposition (the evolution oracle)."""
    mat = hamiltonian.matrix if isinstance(hamiltonian, Operator) else np.asarray(hamiltonian)
    if mat.shape[0] != state0.layout.dim:
        raise ValueError("Hamiltonian dimension does not match state")
    if mat.shape[0] > EXACT_EVOLVE_DIM_LIMIT:
        raise ValueError(f"dimension {mat.shape[0]} exceeds exact-evolution limit {EXACT_EVOLVE_DIM_LIMIT}")
    scale = max(1.0, np.abs(mat).max())
    if np.abs(mat - mat.conj().T).max() > 1e-10 * scale:
        raise ValueError("Hamiltonian must be Hermitian")
    evals, vecs = np.linalg.eigh(mat)
    phases = np.exp(-1j * evals * t)
    psi = vecs @ (phases * (vecs.conj().T @ state0.amplitudes))
    return HybridState(state0.layout, psi)
