"""Dense complex linear algebra for small multipartite operators.

Everything here works on plain square ``numpy`` arrays; tensor-factor
structure is passed explicitly as a ``dims`` sequence whose product equals
the side length.  All tolerances are absolute since every operator in this
package has norm O(1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

# Hermiticity / unitarity checks.
HERM_ATOL = 1e-10
# Eigenvalues above -PSD_CLIP are treated as nonnegative roundoff.
PSD_CLIP = 1e-10

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(m) -> np.ndarray:
    """Coerce to a square complex ndarray."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def is_hermitian(m: np.ndarray, atol: float = HERM_ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def kron(a, b) -> np.ndarray:
    """Tensor product of two square matrices; factor dims concatenate."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(mats) -> np.ndarray:
    mats = list(mats)
    if not mats:
        raise ValueError("kron_all needs at least one matrix")
    return reduce(np.kron, (as_matrix(m) for m in mats))


def _check_dims(m: np.ndarray, dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValueError(f"factor dimensions must be positive, got {dims}")
    if int(np.prod(dims)) != m.shape[0]:
        raise ValueError(f"dims {dims} do not multiply to side length {m.shape[0]}")
    return dims


def partial_trace(m, dims, keep) -> np.ndarray:
    """Trace out all tensor factors not listed in ``keep``.

    ``keep`` holds factor indices into ``dims``; the result keeps those
    factors in their original order and preserves the trace.
    """
    m = as_matrix(m)
    dims = _check_dims(m, dims)
    k = len(dims)
    keep = sorted(set(int(i) for i in keep))
    if any(i < 0 or i >= k for i in keep):
        raise ValueError(f"keep indices {keep} invalid for {k} factors")
    if len(keep) == k:
        return m.copy()
    # Row index i of factor f, column index k+i; traced factors share labels.
    row = list(range(k))
    col = [k + i if i in keep else i for i in range(k)]
    out = [i for i in keep] + [k + i for i in keep]
    tensor = m.reshape(dims + dims)
    reduced = np.einsum(tensor, row + col, out)
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return reduced.reshape(d_keep, d_keep)


def reorder_factors(m, dims, perm) -> np.ndarray:
    """Permute tensor factors: factor ``perm[i]`` of the input becomes factor i."""
    m = as_matrix(m)
    dims = _check_dims(m, dims)
    k = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(k)):
        raise ValueError(f"perm {perm} is not a permutation of {k} factors")
    tensor = m.reshape(dims + dims)
    tensor = tensor.transpose(perm + [k + p for p in perm])
    d = m.shape[0]
    return tensor.reshape(d, d)


@dataclass(frozen=True)
class EigResult:
    """Hermitian eigendecomposition with eigenvalues sorted descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # unitary, columns are eigenvectors

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def herm_eig(m) -> EigResult:
    """Eigendecomposition of a Hermitian matrix (descending eigenvalues)."""
    m = as_matrix(m)
    if not is_hermitian(m):
        raise ValueError("matrix is not Hermitian within 1e-10")
    w, v = np.linalg.eigh(m)
    return EigResult(eigenvalues=w[::-1].copy(), eigenvectors=v[:, ::-1].copy())


def psd_sqrt(m, clip: float = PSD_CLIP) -> np.ndarray:
    """Square root of a positive semidefinite matrix.

    Eigenvalues in [-clip, 0) are treated as roundoff and clipped to zero;
    anything below -clip raises.
    """
    res = herm_eig(m)
    w = res.eigenvalues
    if np.min(w) < -clip:
        raise ValueError(f"matrix has eigenvalue {np.min(w):.3e} < -{clip:.0e}, not PSD")
    v = res.eigenvectors
    s = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return (s + s.conj().T) / 2


def trace_norm(m) -> float:
    """Sum of singular values; for Hermitian input the sum of |eigenvalues|."""
    m = as_matrix(m)
    if is_hermitian(m):
        return float(np.sum(np.abs(np.linalg.eigvalsh(m))))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def unitary_from_hamiltonian(h, t: float) -> np.ndarray:
    """exp(-i t H) for Hermitian H, via eigendecomposition."""
    res = herm_eig(h)
    v = res.eigenvectors
    phases = np.exp(-1j * float(t) * res.eigenvalues)
    return (v * phases) @ v.conj().T
