"""Independent grid-search evaluator for the conditional max-entropy.

Used to cross-check the ascent solver: the conditioning state is swept over
an explicit Bloch-ball grid (qubit case) or a product of Bloch grids
(two-qubit case), zooming on the best cell.  The objective here is written
from scratch on purpose -- it shares no code with the solver beyond numpy.
"""

from __future__ import annotations

import numpy as np


def _bloch_sigma(r: np.ndarray) -> np.ndarray:
    """Stack of qubit density matrices from Bloch vectors (n, 3)."""
    x, y, z = r[:, 0], r[:, 1], r[:, 2]
    out = np.empty((len(r), 2, 2), dtype=complex)
    out[:, 0, 0] = (1 + z) / 2
    out[:, 1, 1] = (1 - z) / 2
    out[:, 0, 1] = (x - 1j * y) / 2
    out[:, 1, 0] = (x + 1j * y) / 2
    return out


def _objective_batch(sqrt_rho: np.ndarray, d_a: int, sigmas: np.ndarray) -> np.ndarray:
    """|| sqrt(rho) sqrt(I (x) sigma) ||_1 for a stack of sigmas."""
    eye = np.eye(d_a)
    taus = np.einsum("ij,nkl->nikjl", eye, sigmas).reshape(
        len(sigmas), sqrt_rho.shape[0], sqrt_rho.shape[0]
    )
    mats = sqrt_rho @ taus @ sqrt_rho
    ev = np.linalg.eigvalsh(mats)
    return np.sqrt(np.clip(ev, 0.0, None)).sum(axis=1)


def _sqrt_psd(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def _axis_grids(centers: np.ndarray, half_width: float, steps: int) -> list[np.ndarray]:
    return [
        np.clip(np.linspace(c - half_width, c + half_width, steps), -1.0, 1.0)
        for c in centers
    ]


def hmax_grid_oracle(
    rho: np.ndarray,
    d_a: int,
    levels: int = 5,
    steps: int = 13,
) -> float:
    """Grid-search lower bound on H_max(A|B), in bits.

    The conditioning system must be one qubit or two qubits; the two-qubit
    sweep is restricted to product conditioning states (exact whenever the
    optimum is a product, e.g. for tensor-product inputs).
    """
    rho = np.asarray(rho, dtype=complex)
    d_b = rho.shape[0] // d_a
    if d_a * d_b != rho.shape[0]:
        raise ValueError("d_a does not divide the state dimension")
    sqrt_rho = _sqrt_psd(rho)

    if d_b == 2:
        centers = np.zeros(3)
        half = 1.0
        best = -np.inf
        for _ in range(levels):
            axes = _axis_grids(centers, half, steps)
            pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
            pts = pts[np.einsum("ij,ij->i", pts, pts) <= 1.0 + 1e-12]
            vals = _objective_batch(sqrt_rho, d_a, _bloch_sigma(pts))
            k = int(np.argmax(vals))
            if vals[k] > best:
                best = float(vals[k])
                centers = pts[k]
            half *= 2.0 / (steps - 1)
        return 2 * float(np.log2(best))

    if d_b == 4:
        centers = np.zeros(6)
        half = 1.0
        best = -np.inf
        pair_steps = 7
        for _ in range(levels):
            axes = _axis_grids(centers, half, pair_steps)
            pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 6)
            ok = (np.einsum("ij,ij->i", pts[:, :3], pts[:, :3]) <= 1.0 + 1e-12) & (
                np.einsum("ij,ij->i", pts[:, 3:], pts[:, 3:]) <= 1.0 + 1e-12
            )
            pts = pts[ok]
            left = _bloch_sigma(pts[:, :3])
            right = _bloch_sigma(pts[:, 3:])
            sigmas = np.einsum("nij,nkl->nikjl", left, right).reshape(-1, 4, 4)
            vals = _objective_batch(sqrt_rho, d_a, sigmas)
            k = int(np.argmax(vals))
            if vals[k] > best:
                best = float(vals[k])
                centers = pts[k]
            half *= 2.0 / (pair_steps - 1)
        return 2 * float(np.log2(best))

    raise ValueError("oracle supports conditioning dims 2 and 4 only")
