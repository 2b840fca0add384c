"""Quantum states, channels, and channel-state duality.

States carry labeled tensor factors so that marginals and channel
application can be addressed by subsystem name.  Channels are stored in
Kraus form; the Choi operator is computed on demand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    HERM_ATOL,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    as_matrix,
    is_hermitian,
    kron_all,
    partial_trace,
    reorder_factors,
    unitary_from_hamiltonian,
)

# Full PSD validation (an eigensolve) is only run for operators up to this
# side length; larger ones get the cheap Hermiticity/trace checks.
_PSD_CHECK_MAX_DIM = 64


@dataclass(frozen=True)
class MultipartiteState:
    """Density operator with named tensor factors.

    ``labels`` and ``dims`` run in the same order as the tensor factors of
    ``matrix``.  Normalized states have unit trace; trace < 1 is allowed
    and flagged via ``subnormalized``.
    """

    matrix: np.ndarray
    labels: tuple[str, ...]
    dims: tuple[int, ...]
    subnormalized: bool = field(default=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        labels = tuple(str(x) for x in self.labels)
        dims = tuple(int(d) for d in self.dims)
        if len(labels) != len(dims):
            raise ValueError("labels and dims must have equal length")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate factor labels: {labels}")
        if int(np.prod(dims)) != m.shape[0]:
            raise ValueError(f"dims {dims} do not match side length {m.shape[0]}")
        if not is_hermitian(m):
            raise ValueError("density operator is not Hermitian within 1e-10")
        tr = float(np.trace(m).real)
        if tr > 1 + HERM_ATOL:
            raise ValueError(f"trace {tr} exceeds 1")
        sub = tr < 1 - HERM_ATOL
        if m.shape[0] <= _PSD_CHECK_MAX_DIM:
            lo = float(np.min(np.linalg.eigvalsh(m)))
            if lo < -1e-10:
                raise ValueError(f"density operator has eigenvalue {lo:.3e} < -1e-10")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "subnormalized", bool(sub))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"no factor labeled {label!r} in {self.labels}") from None

    def dim_of(self, *labels: str) -> int:
        return int(np.prod([self.dims[self.index(l)] for l in labels])) if labels else 1

    def marginal(self, keep_labels) -> "MultipartiteState":
        """Partial trace keeping the named factors (original order)."""
        keep_labels = [keep_labels] if isinstance(keep_labels, str) else list(keep_labels)
        keep = [self.index(l) for l in keep_labels]
        reduced = partial_trace(self.matrix, self.dims, keep)
        order = sorted(keep)
        return MultipartiteState(
            reduced,
            tuple(self.labels[i] for i in order),
            tuple(self.dims[i] for i in order),
        )

    def reorder(self, new_labels) -> "MultipartiteState":
        """Permute tensor factors into the given label order."""
        new_labels = tuple(new_labels)
        if sorted(new_labels) != sorted(self.labels):
            raise ValueError(f"{new_labels} is not a reordering of {self.labels}")
        perm = [self.index(l) for l in new_labels]
        return MultipartiteState(
            reorder_factors(self.matrix, self.dims, perm),
            new_labels,
            tuple(self.dims[p] for p in perm),
        )

    def tensor(self, other: "MultipartiteState") -> "MultipartiteState":
        if set(self.labels) & set(other.labels):
            raise ValueError("tensor factors must have disjoint labels")
        return MultipartiteState(
            np.kron(self.matrix, other.matrix),
            self.labels + other.labels,
            self.dims + other.dims,
        )


@dataclass(frozen=True)
class QuantumChannel:
    """Completely positive trace-preserving map in Kraus form."""

    kraus: tuple[np.ndarray, ...]
    d_in: int
    d_out: int

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (self.d_out, self.d_in):
                raise ValueError(f"Kraus shape {k.shape} != ({self.d_out}, {self.d_in})")
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(self.d_in))) > 1e-10:
            raise ValueError("Kraus operators do not sum to identity (not trace preserving)")
        object.__setattr__(self, "kraus", ops)

    def apply_matrix(self, rho: np.ndarray) -> np.ndarray:
        rho = as_matrix(rho)
        if rho.shape[0] != self.d_in:
            raise ValueError(f"input dim {rho.shape[0]} != channel input dim {self.d_in}")
        return sum(k @ rho @ k.conj().T for k in self.kraus)


@dataclass(frozen=True)
class HeisenbergCouplings:
    """XX/YY/ZZ coupling strengths of two system qubits to a shared bath qubit."""

    j_left: tuple[float, float, float]
    j_right: tuple[float, float, float]

    def __post_init__(self):
        left = tuple(float(x) for x in self.j_left)
        right = tuple(float(x) for x in self.j_right)
        if len(left) != 3 or len(right) != 3:
            raise ValueError("each coupling vector needs exactly 3 components")
        if not all(np.isfinite(left + right)):
            raise ValueError("couplings must be finite")
        object.__setattr__(self, "j_left", left)
        object.__setattr__(self, "j_right", right)


# ---------------------------------------------------------------------------
# state constructors


def _max_entangled_matrix(d: int) -> np.ndarray:
    psi = np.eye(d, dtype=complex).reshape(d * d) / np.sqrt(d)
    return np.outer(psi, psi.conj())


def max_entangled(r: int, labels=("A", "B")) -> MultipartiteState:
    """Maximally entangled state of Schmidt rank 2**r on two labeled factors."""
    r = int(r)
    if r < 0:
        raise ValueError("r must be nonnegative")
    d = 2**r
    return MultipartiteState(_max_entangled_matrix(d), tuple(labels), (d, d))


def classical_corr(c_bits: int, labels=("M", "R")) -> MultipartiteState:
    """Uniform perfectly correlated classical register and its copy."""
    c = int(c_bits)
    if c < 0:
        raise ValueError("c_bits must be nonnegative")
    d = 2**c
    m = np.zeros((d * d, d * d), dtype=complex)
    for j in range(d):
        m[j * d + j, j * d + j] = 1.0 / d
    return MultipartiteState(m, tuple(labels), (d, d))


def hybrid_source(c_bits: int, q_qubits: int) -> MultipartiteState:
    """Joint source: classically correlated pair tensored with shared ebits.

    Factors are labeled Mc, Rc (classical message and its reference copy)
    and Mq, Rq (quantum message and reference).
    """
    omega = classical_corr(c_bits, labels=("Mc", "Rc"))
    phi = max_entangled(q_qubits, labels=("Mq", "Rq"))
    return omega.tensor(phi)


# ---------------------------------------------------------------------------
# channel constructors


def identity_channel(d: int = 2) -> QuantumChannel:
    return QuantumChannel((np.eye(d, dtype=complex),), d, d)


def dephasing(p: float) -> QuantumChannel:
    """Phase flip with probability p/2: rho -> (1-p/2) rho + (p/2) Z rho Z."""
    p = float(p)
    if not 0 <= p <= 1:
        raise ValueError(f"dephasing parameter {p} outside [0, 1]")
    return QuantumChannel(
        (np.sqrt(1 - p / 2) * np.eye(2, dtype=complex), np.sqrt(p / 2) * PAULI_Z),
        2,
        2,
    )


def amplitude_damping(gamma: float) -> QuantumChannel:
    """Decay |1> -> |0> with probability gamma."""
    g = float(gamma)
    if not 0 <= g <= 1:
        raise ValueError(f"damping parameter {g} outside [0, 1]")
    k0 = np.array([[1, 0], [0, np.sqrt(1 - g)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(g)], [0, 0]], dtype=complex)
    return QuantumChannel((k0, k1), 2, 2)


def tensor_channel(chs) -> QuantumChannel:
    """Tensor product channel; Kraus set is all products of constituents."""
    chs = list(chs)
    if not chs:
        raise ValueError("tensor_channel needs at least one channel")
    kraus = tuple(kron_all(ks) for ks in itertools.product(*(ch.kraus for ch in chs)))
    d_in = int(np.prod([ch.d_in for ch in chs]))
    d_out = int(np.prod([ch.d_out for ch in chs]))
    return QuantumChannel(kraus, d_in, d_out)


def heisenberg_channel(p: float, t: float, j: HeisenbergCouplings) -> QuantumChannel:
    """Two neighboring qubits coupled to one shared thermal bath qubit.

    Each system qubit interacts with the bath via -Jx XX - Jy YY - Jz ZZ for
    time t; the bath starts in diag(1-p, p) (population p on |1>, the
    zero-temperature limit being p=1) and is traced out afterwards.
    Factor order is (left qubit, right qubit, bath), bath last.
    """
    p = float(p)
    t = float(t)
    if not 0.5 <= p <= 1:
        raise ValueError(f"bath population {p} outside [0.5, 1]")
    if t < 0:
        raise ValueError("interaction time must be nonnegative")
    eye2 = np.eye(2, dtype=complex)
    paulis = (PAULI_X, PAULI_Y, PAULI_Z)
    h = np.zeros((8, 8), dtype=complex)
    for s, jv in enumerate((j.j_left, j.j_right)):
        for axis in range(3):
            ops = [eye2, eye2, paulis[axis]]
            ops[s] = paulis[axis]
            h -= jv[axis] * kron_all(ops)
    u = unitary_from_hamiltonian(h, t)
    env_weights = (1.0 - p, p)  # populations of bath |0>, |1>
    blocks = u.reshape(4, 2, 4, 2)  # (sys_out, env_out, sys_in, env_in)
    kraus = []
    for env_in, w in enumerate(env_weights):
        if w < 1e-12:
            continue
        for env_out in range(2):
            kraus.append(np.sqrt(w) * blocks[:, env_out, :, env_in])
    return QuantumChannel(tuple(kraus), 4, 4)


# ---------------------------------------------------------------------------
# duality and application


def choi_from_channel(ch: QuantumChannel, labels=("A", "B")) -> MultipartiteState:
    """Choi operator (id (x) ch) applied to the maximally entangled state.

    Factor ``labels[0]`` is the retained input copy, ``labels[1]`` the
    channel output; the marginal on the input copy is completely mixed.
    """
    d = ch.d_in
    j = np.zeros((d * ch.d_out, d * ch.d_out), dtype=complex)
    for k in ch.kraus:
        v = k.T.reshape(-1)  # components (i, b) of (I (x) K) |Gamma>
        j += np.outer(v, v.conj())
    return MultipartiteState(j / d, tuple(labels), (d, ch.d_out))


def channel_from_choi(rho: MultipartiteState, d_in: int, d_out: int) -> QuantumChannel:
    """Invert the channel-state duality; requires a completely mixed input marginal."""
    if len(rho.dims) != 2 or rho.dims != (d_in, d_out):
        raise ValueError(f"expected a two-factor state with dims ({d_in}, {d_out})")
    marg = rho.marginal(rho.labels[0]).matrix
    if np.max(np.abs(marg - np.eye(d_in) / d_in)) > 1e-8:
        raise ValueError("input marginal is not completely mixed: not a CPTP dual")
    w, v = np.linalg.eigh(d_in * rho.matrix)
    kraus = []
    for lam, vec in zip(w, v.T):
        if lam < 1e-12:
            continue
        kraus.append(np.sqrt(lam) * vec.reshape(d_in, d_out).T)
    return QuantumChannel(tuple(kraus), d_in, d_out)


def apply_channel(ch: QuantumChannel, state: MultipartiteState, target: str) -> MultipartiteState:
    """Apply a channel to one named factor, identity elsewhere."""
    idx = state.index(target)
    if state.dims[idx] != ch.d_in:
        raise ValueError(
            f"factor {target!r} has dim {state.dims[idx]}, channel expects {ch.d_in}"
        )
    d_pre = int(np.prod(state.dims[:idx])) if idx else 1
    d_post = int(np.prod(state.dims[idx + 1 :])) if idx + 1 < len(state.dims) else 1
    eye_pre = np.eye(d_pre, dtype=complex)
    eye_post = np.eye(d_post, dtype=complex)
    out = np.zeros(
        (d_pre * ch.d_out * d_post, d_pre * ch.d_out * d_post), dtype=complex
    )
    for k in ch.kraus:
        k_full = np.kron(eye_pre, np.kron(k, eye_post))
        out += k_full @ state.matrix @ k_full.conj().T
    out = (out + out.conj().T) / 2
    dims = state.dims[:idx] + (ch.d_out,) + state.dims[idx + 1 :]
    return MultipartiteState(out, state.labels, dims)
