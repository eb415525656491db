"""Truncated-Fock and qubit operator algebra on hybrid registers.

A register is an ordered list of wires, each either a qubit (dimension 2)
or a qumode truncated at Fock level ``cutoff`` (dimension ``cutoff + 1``).
Wire 0 is the slowest-varying (leftmost) tensor factor, so a basis label
reads left to right like a ket: ``|wire0, wire1, ...>``.

Spin convention: ``sigma_z |up> = +|up>`` and ``|up>`` is basis index 0,
so the qubit excitation number operator is ``(I + sigma_z)/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "WireKind",
    "WireSpec",
    "qubit",
    "qumode",
    "RegisterLayout",
    "HybridState",
    "Operator",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "ladder_ops",
    "quadratures",
    "embed",
    "partial_trace",
    "expm_antihermitian",
    "fock_wavefunction",
]

# Pauli matrices in the {|up>, |down>} basis (sigma_z|up> = +|up>).
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)   # |up><down|
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |down><up|


class WireKind(Enum):
    QUBIT = "qubit"
    QUMODE = "qumode"


@dataclass(frozen=True)
class WireSpec:
    """One wire of a register: a qubit, or a qumode with a Fock cutoff."""

    kind: WireKind
    cutoff: int | None = None

    def __post_init__(self):
        if self.kind is WireKind.QUBIT:
            if self.cutoff is not None:
                raise ValueError("qubit wires carry no cutoff")
        else:
            if self.cutoff is None or self.cutoff < 1:
                raise ValueError(f"qumode cutoff must be >= 1, got {self.cutoff}")

    @property
    def dim(self) -> int:
        return 2 if self.kind is WireKind.QUBIT else self.cutoff + 1

    @property
    def is_qubit(self) -> bool:
        return self.kind is WireKind.QUBIT


def qubit() -> WireSpec:
    return WireSpec(WireKind.QUBIT)


def qumode(cutoff: int) -> WireSpec:
    return WireSpec(WireKind.QUMODE, cutoff)


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered wires defining the tensor-product basis.

    Wire 0 is the slowest index: ``index = sum_i value_i * stride_i`` with
    ``stride_i = prod(dims[i+1:])``.
    """

    wires: tuple[WireSpec, ...]

    def __init__(self, wires: Iterable[WireSpec]):
        object.__setattr__(self, "wires", tuple(wires))
        if not self.wires:
            raise ValueError("layout needs at least one wire")

    @property
    def n_wires(self) -> int:
        return len(self.wires)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(w.dim for w in self.wires)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    def check_wires(self, targets: Sequence[int]) -> None:
        if len(set(targets)) != len(targets):
            raise ValueError(f"duplicate target wires: {tuple(targets)}")
        for t in targets:
            if not 0 <= t < self.n_wires:
                raise ValueError(f"wire {t} out of range for {self.n_wires}-wire layout")

    def index(self, values: Sequence[int]) -> int:
        """Flat basis index of the computational-basis label ``values``."""
        if len(values) != self.n_wires:
            raise ValueError("one value per wire required")
        idx = 0
        for v, d in zip(values, self.dims):
            if not 0 <= v < d:
                raise ValueError(f"basis value {v} out of range for local dimension {d}")
            idx = idx * d + v
        return idx

    def values(self, index: int) -> tuple[int, ...]:
        """Inverse of :meth:`index`."""
        if not 0 <= index < self.dim:
            raise ValueError("index out of range")
        out = []
        for d in reversed(self.dims):
            out.append(index % d)
            index //= d
        return tuple(reversed(out))

    def basis_state(self, values: Sequence[int]) -> "HybridState":
        amps = np.zeros(self.dim, dtype=complex)
        amps[self.index(values)] = 1.0
        return HybridState(self, amps)


@dataclass
class Operator:
    """Dense complex matrix together with the local dimensions it acts on."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, matrix: np.ndarray, dims: Sequence[int] | None = None,
                 hermitian: bool | None = None, unitary: bool | None = None):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("operator matrix must be square")
        if dims is None:
            dims = (matrix.shape[0],)
        dims = tuple(int(d) for d in dims)
        if math.prod(dims) != matrix.shape[0]:
            raise ValueError(f"dims {dims} inconsistent with matrix dimension {matrix.shape[0]}")
        self.matrix = matrix
        self.dims = dims
        if hermitian:
            err = np.abs(matrix - matrix.conj().T).max()
            if err > 1e-10 * max(1.0, np.abs(matrix).max()):
                raise ValueError(f"matrix claimed Hermitian but deviates by {err:.2e}")
        if unitary:
            err = np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0])).max()
            if err > 1e-9:
                raise ValueError(f"matrix claimed unitary but U^dag U deviates by {err:.2e}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dag(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.dims)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return np.abs(self.matrix - self.matrix.conj().T).max() <= tol * max(1.0, np.abs(self.matrix).max())

    def is_unitary(self, tol: float = 1e-9) -> bool:
        d = self.matrix.shape[0]
        return np.abs(self.matrix.conj().T @ self.matrix - np.eye(d)).max() <= tol

    def __matmul__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix @ other.matrix, self.dims)

    def __add__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix + other.matrix, self.dims)

    def __sub__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix - other.matrix, self.dims)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.matrix * scalar, self.dims)

    __rmul__ = __mul__


def _as_matrix(op) -> np.ndarray:
    return op.matrix if isinstance(op, Operator) else np.asarray(op, dtype=complex)


class HybridState:
    """Normalized amplitude vector over a register layout."""

    __slots__ = ("layout", "amplitudes")

    def __init__(self, layout: RegisterLayout, amplitudes: np.ndarray, normalize: bool = False):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (layout.dim,):
            raise ValueError(f"amplitude vector of length {layout.dim} required, got {amplitudes.shape}")
        if normalize:
            n = np.linalg.norm(amplitudes)
            if n == 0:
                raise ValueError("cannot normalize the zero vector")
            amplitudes = amplitudes / n
        self.layout = layout
        self.amplitudes = amplitudes

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "HybridState":
        return HybridState(self.layout, self.amplitudes.copy())

    def overlap(self, other: "HybridState") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped with one axis per wire (view when possible)."""
        return self.amplitudes.reshape(self.layout.dims)


def ladder_ops(cutoff: int) -> tuple[Operator, Operator, Operator]:
    """Annihilation, creation and number operators truncated at ``cutoff``.

    ``a[n-1, n] = sqrt(n)``, ``a_dag = a^dagger`` and ``N = a_dag a``
    = diag(0..cutoff).  On the truncated space the commutator picks up a
    boundary term: ``[a, a_dag] = I - (cutoff+1) |cutoff><cutoff|``.
    """
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    d = cutoff + 1
    a = np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1).astype(complex)
    a_dag = a.conj().T
    n = np.diag(np.arange(d, dtype=float)).astype(complex)
    dims = (d,)
    return Operator(a, dims), Operator(a_dag, dims), Operator(n, dims)


def quadratures(cutoff: int) -> tuple[Operator, Operator]:
    """Position and momentum operators X = (a_dag + a)/sqrt(2), P = i(a_dag - a)/sqrt(2)."""
    a, a_dag, _ = ladder_ops(cutoff)
    x = Operator((a_dag.matrix + a.matrix) / np.sqrt(2.0), a.dims)
    p = Operator(1j * (a_dag.matrix - a.matrix) / np.sqrt(2.0), a.dims)
    return x, p


def embed(op, targets: Sequence[int], layout: RegisterLayout) -> Operator:
    """Tensor ``op`` (acting on ``targets``, in the given order) with identities.

    ``targets`` need not be adjacent or sorted; the first target is the
    slowest index of ``op``'s own tensor ordering.
    """
    mat = _as_matrix(op)
    targets = tuple(targets)
    layout.check_wires(targets)
    dims = layout.dims
    target_dims = tuple(dims[t] for t in targets)
    d_t = math.prod(target_dims)
    if mat.shape != (d_t, d_t):
        raise ValueError(
            f"operator of dimension {mat.shape[0]} does not match target dimensions {target_dims}")
    rest = tuple(i for i in range(layout.n_wires) if i not in targets)
    rest_dims = tuple(dims[i] for i in rest)
    d_r = math.prod(rest_dims) if rest else 1
    full = np.kron(mat, np.eye(d_r, dtype=complex))
    # Axis order after kron: (targets..., rest...) for rows and columns.
    order = targets + rest
    perm = [order.index(i) for i in range(layout.n_wires)]
    tensor = full.reshape(target_dims + rest_dims + target_dims + rest_dims)
    n = layout.n_wires
    tensor = tensor.transpose(perm + [n + p for p in perm])
    return Operator(tensor.reshape(layout.dim, layout.dim), dims)


def partial_trace(state_or_rho, keep: Sequence[int], layout: RegisterLayout | None = None) -> np.ndarray:
    """Reduced density matrix over the ``keep`` wires (in ascending wire order)."""
    if isinstance(state_or_rho, HybridState):
        if layout is None:
            layout = state_or_rho.layout
        rho_tensor = None
        psi = state_or_rho.tensor()
    else:
        if layout is None:
            raise ValueError("layout required when passing a raw density matrix")
        rho = np.asarray(state_or_rho, dtype=complex)
        if rho.shape != (layout.dim, layout.dim):
            raise ValueError("density matrix does not match layout dimension")
        rho_tensor = rho.reshape(layout.dims + layout.dims)
        psi = None
    keep = tuple(sorted(keep))
    if not keep:
        raise ValueError("keep must be non-empty")
    layout.check_wires(keep)
    dims = layout.dims
    traced = tuple(i for i in range(layout.n_wires) if i not in keep)
    d_keep = math.prod(dims[i] for i in keep)

    if psi is not None:
        # |psi><psi| reduced without forming the full density matrix.
        perm = keep + traced
        d_tr = math.prod(dims[i] for i in traced) if traced else 1
        m = psi.transpose(perm).reshape(d_keep, d_tr)
        return m @ m.conj().T

    n = layout.n_wires
    for i, w in enumerate(sorted(traced, reverse=True)):
        rho_tensor = np.trace(rho_tensor, axis1=w, axis2=w + n - i)
        n -= 1
    return rho_tensor.reshape(d_keep, d_keep)


def expm_antihermitian(gen, tol: float = 1e-10) -> Operator:
    """exp(G) for anti-Hermitian G, via eigendecomposition of H = -iG.

    Guarantees an exactly unitary result up to rounding; raises if G fails
    the anti-Hermiticity check.
    """
    mat = _as_matrix(gen)
    scale = max(1.0, np.abs(mat).max())
    if np.abs(mat + mat.conj().T).max() > tol * scale:
        raise ValueError("generator is not anti-Hermitian")
    h = -1j * mat
    evals, vecs = np.linalg.eigh(h)
    u = (vecs * np.exp(1j * evals)) @ vecs.conj().T
    dims = gen.dims if isinstance(gen, Operator) else (mat.shape[0],)
    return Operator(u, dims)


def fock_wavefunction(n: int, x) -> np.ndarray | float:
    """Harmonic-oscillator position wave function psi_n(x), hbar = 1.

    psi_n(x) = pi^{-1/4} / sqrt(2^n n!) * H_n(x) exp(-x^2/2), evaluated by
    the normalized three-term recurrence (stable for moderate n and |x|).
    """
    if n < 0:
        raise ValueError("Fock index must be >= 0")
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    psi_prev = np.pi ** -0.25 * np.exp(-0.5 * x_arr**2)
    if n == 0:
        return float(psi_prev[0]) if scalar else psi_prev
    psi = np.sqrt(2.0) * x_arr * psi_prev
    for k in range(2, n + 1):
        psi, psi_prev = (np.sqrt(2.0 / k) * x_arr * psi
                         - np.sqrt((k - 1.0) / k) * psi_prev), psi
    return float(psi[0]) if scalar else psi
