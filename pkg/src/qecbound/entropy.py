"""Purified fidelity/distance and conditional entropies.

The conditional max-entropy

    H_max(A|B) = sup_sigma  log2 || sqrt(rho_AB) sqrt(I_A (x) sigma_B) ||_1^2

is computed by Frank-Wolfe ascent over the density-matrix simplex of the
conditioning state sigma.  The objective

    G(sigma) = || sqrt(rho) sqrt(I (x) sigma) ||_1 = F(rho, I (x) sigma)

is concave in sigma (joint concavity of the fidelity), so every linear
subproblem is solved exactly by the top eigenvector of the supergradient,
and the reported entropy is the exact objective evaluated at the final
iterate -- a certified lower bound on the supremum at every iteration.

The supergradient comes from the variational form
F(rho, tau) = (1/2) inf_{Z>0} (tr[rho Z] + tr[tau Z^-1]); at the optimal Z,

    dF/dtau = (1/2) Z^-1 = (1/2) sqrt(rho) M^{-1/2} sqrt(rho),

with M = sqrt(rho) tau sqrt(rho) and the inverse square root taken on the
support.  The sigma-gradient is its partial trace over A.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, psd_sqrt
from .quantum import MultipartiteState, QuantumChannel, choi_from_channel

# Relative spectral cutoff defining the support of rho inside the solver.
_SUPPORT_CUTOFF = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    """Stopping rule for the conditional max-entropy ascent.

    tol: stop once the objective improves by less than this per iteration.
    max_iter: iteration cap; hitting it flags the result as not converged.
    boundary_reg: mixing weight toward the completely mixed state when
        evaluating gradients (the gradient is singular at rank-deficient
        sigma).
    """

    tol: float = 1e-9
    max_iter: int = 5000
    boundary_reg: float = 1e-12

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter <= 0:
            raise ValueError("max_iter must be positive")
        if not 0 <= self.boundary_reg < 1:
            raise ValueError("boundary_reg must be in [0, 1)")


@dataclass(frozen=True)
class EntropyResult:
    """Conditional max-entropy value with the optimizing conditioning state.

    ``value`` (bits) is the exact objective evaluated at ``sigma_opt``, so it
    is a certified lower bound on the supremum.  ``objective_trace`` holds the
    fidelity objective after each iteration (nondecreasing); ``fw_gap`` is the
    final Frank-Wolfe duality gap, an upper bound on the remaining fidelity
    suboptimality.
    """

    value: float
    sigma_opt: MultipartiteState
    iterations: int
    last_improvement: float
    converged: bool
    objective_trace: tuple[float, ...]
    fw_gap: float


def purified_fidelity(rho, sigma) -> float:
    """Fidelity extended to subnormalized PSD operators."""
    rho = as_matrix(rho)
    sigma = as_matrix(sigma)
    tr_r = float(np.trace(rho).real)
    tr_s = float(np.trace(sigma).real)
    if tr_r > 1 + 1e-10 or tr_s > 1 + 1e-10:
        raise ValueError("purified fidelity needs traces <= 1")
    sr = psd_sqrt(rho)
    f = _sum_sqrt_spectrum(sr @ sigma @ sr)
    f += np.sqrt(max(0.0, 1 - tr_r) * max(0.0, 1 - tr_s))
    return min(f, 1.0)


def purified_distance(rho, sigma) -> float:
    f = purified_fidelity(rho, sigma)
    return float(np.sqrt(max(0.0, 1.0 - f * f)))


def conditional_fidelity(rho, d_a: int, sigma) -> float:
    """Exact objective || sqrt(rho) sqrt(I_{d_a} (x) sigma) ||_1.

    ``rho`` lives on A (x) B with the A factor first and dim(A) = d_a.
    """
    rho = as_matrix(rho)
    sigma = as_matrix(sigma)
    if rho.shape[0] % d_a:
        raise ValueError("d_a does not divide the state dimension")
    d_b = rho.shape[0] // d_a
    if sigma.shape[0] != d_b:
        raise ValueError(f"sigma dim {sigma.shape[0]} != conditioning dim {d_b}")
    sr = psd_sqrt(rho)
    tau = np.kron(np.eye(d_a), sigma)
    return _sum_sqrt_spectrum(sr @ tau @ sr)


def _sum_sqrt_spectrum(m: np.ndarray) -> float:
    """Sum of square roots of the eigenvalues of a PSD matrix.

    Eigenvalues below 1e-14 of the largest are discarded: they are
    eigensolver roundoff whose square roots would otherwise inflate the
    result by ~1e-8, and dropping nonnegative terms keeps the value a
    lower bound of the exact norm.
    """
    w = np.linalg.eigvalsh(m)
    cut = max(float(w[-1]), 0.0) * 1e-14
    return float(np.sum(np.sqrt(w[w > cut])))


def _support(rho: np.ndarray):
    """Eigenbasis of rho restricted to its numerical support."""
    w, v = np.linalg.eigh(rho)
    cut = max(w[-1], 0.0) * _SUPPORT_CUTOFF
    keep = w > cut
    return w[keep], v[:, keep]


def _sigma_state(sigma: np.ndarray, labels, dims) -> MultipartiteState:
    sigma = (sigma + sigma.conj().T) / 2
    w = np.linalg.eigvalsh(sigma)
    if w[0] < -1e-12:  # roundoff from the convex updates
        v = np.linalg.eigh(sigma)[1]
        sigma = (v * np.clip(w, 0.0, None)) @ v.conj().T
        sigma /= np.trace(sigma).real
    return MultipartiteState(sigma, labels, dims)


def hmax_cond(
    rho: MultipartiteState,
    a_labels,
    b_labels,
    cfg: SolverConfig | None = None,
) -> EntropyResult:
    """Conditional max-entropy H_max(A|B) of a normalized state, in bits.

    ``a_labels`` and ``b_labels`` must partition the factors of ``rho``.
    The returned value is always the exact objective at the returned
    conditioning state (see EntropyResult).
    """
    cfg = cfg or SolverConfig()
    a_labels = [a_labels] if isinstance(a_labels, str) else list(a_labels)
    b_labels = [b_labels] if isinstance(b_labels, str) else list(b_labels)
    if sorted(a_labels + b_labels) != sorted(rho.labels):
        raise ValueError("a_labels and b_labels must partition the state's factors")
    if rho.subnormalized or abs(float(np.trace(rho.matrix).real) - 1.0) > 1e-8:
        raise ValueError("conditional max-entropy requires a normalized state")

    ordered = rho.reorder(tuple(a_labels + b_labels))
    d_a = ordered.dim_of(*a_labels)
    d_b = ordered.dim_of(*b_labels)
    b_dims = tuple(ordered.dims[len(a_labels) :])
    mat = ordered.matrix

    if d_b == 1:
        sr = psd_sqrt(mat)
        g = float(np.trace(sr).real)
        sigma = _sigma_state(np.eye(1, dtype=complex), tuple(b_labels), b_dims)
        return EntropyResult(2 * np.log2(g), sigma, 0, 0.0, True, (g,), 0.0)

    # Work in the support eigenbasis of rho: with rho = P D P^dagger,
    # the nonzero spectrum of sqrt(rho) tau sqrt(rho) equals that of
    # D^{1/2} (P^dagger tau P) D^{1/2}, an r x r problem.
    lam, p_mat = _support(mat)
    sqrt_lam = np.sqrt(lam)
    pr = p_mat.reshape(d_a, d_b, p_mat.shape[1])
    pr_c = pr.conj()

    def compressed(sigma: np.ndarray) -> np.ndarray:
        b = np.einsum("abi,bc,acj->ij", pr_c, sigma, pr, optimize=True)
        return sqrt_lam[:, None] * b * sqrt_lam[None, :]

    objective_from_w = _sum_sqrt_spectrum

    pi_b = np.eye(d_b, dtype=complex) / d_b
    sigma = pi_b.copy()
    w_cur = compressed(sigma)
    g_cur = objective_from_w(w_cur)
    trace = [g_cur]
    eta = cfg.boundary_reg
    gap = np.inf
    improvement = np.inf
    iterations = 0
    converged = False

    for iterations in range(1, cfg.max_iter + 1):
        sigma_reg = (1 - eta) * sigma + eta * pi_b
        w_reg = compressed(sigma_reg)
        ev, vec = np.linalg.eigh(w_reg)
        inv_sqrt = np.where(ev > max(ev[-1], 0.0) * 1e-14, 1.0 / np.sqrt(np.clip(ev, 1e-300, None)), 0.0)
        core = (vec * inv_sqrt) @ vec.conj().T
        core = sqrt_lam[:, None] * core * sqrt_lam[None, :]
        grad = 0.5 * np.einsum("abi,ij,acj->bc", pr, core, pr_c, optimize=True)
        grad = (grad + grad.conj().T) / 2

        gev, gvec = np.linalg.eigh(grad)
        direction = np.outer(gvec[:, -1], gvec[:, -1].conj())
        gap = float(gev[-1] - np.real(np.trace(grad @ sigma)))
        w_dir = compressed(direction)

        gamma, g_new = _line_search(w_cur, w_dir, objective_from_w)
        if g_new >= g_cur:
            sigma = (1 - gamma) * sigma + gamma * direction
            sigma = (sigma + sigma.conj().T) / 2
            w_cur = (1 - gamma) * w_cur + gamma * w_dir
        else:
            g_new = g_cur
        improvement = g_new - g_cur
        g_cur = g_new
        trace.append(g_cur)
        if improvement < cfg.tol:
            converged = True
            break

    sigma_state = _sigma_state(sigma, tuple(b_labels), b_dims)
    g_exact = conditional_fidelity(mat, d_a, sigma_state.matrix)
    value = 2 * float(np.log2(g_exact))
    return EntropyResult(
        value=value,
        sigma_opt=sigma_state,
        iterations=iterations,
        last_improvement=float(improvement),
        converged=converged,
        objective_trace=tuple(trace),
        fw_gap=gap,
    )


def _line_search(w0: np.ndarray, w1: np.ndarray, objective, levels: int = 4, n: int = 17):
    """Maximize the concave gamma -> objective((1-gamma) w0 + gamma w1) on [0,1].

    Batched grid refinement: each level evaluates n points of the current
    bracket in one stacked eigensolve and zooms on the best one.
    """
    lo, hi = 0.0, 1.0
    best_gamma, best_val = 0.0, -np.inf
    for _ in range(levels):
        gammas = np.linspace(lo, hi, n)
        stack = (1 - gammas)[:, None, None] * w0 + gammas[:, None, None] * w1
        ev = np.linalg.eigvalsh(stack)
        cut = np.clip(ev[:, -1:], 0.0, None) * 1e-14
        vals = np.where(ev > cut, np.sqrt(np.clip(ev, 1e-300, None)), 0.0).sum(axis=1)
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val, best_gamma = float(vals[k]), float(gammas[k])
        span = (hi - lo) / (n - 1)
        lo = max(0.0, gammas[k] - span)
        hi = min(1.0, gammas[k] + span)
    return best_gamma, best_val


def von_neumann_cond(rho: MultipartiteState, a_labels, b_labels) -> float:
    """Conditional von Neumann entropy S(AB) - S(B), in bits."""
    a_labels = [a_labels] if isinstance(a_labels, str) else list(a_labels)
    b_labels = [b_labels] if isinstance(b_labels, str) else list(b_labels)
    if sorted(a_labels + b_labels) != sorted(rho.labels):
        raise ValueError("a_labels and b_labels must partition the state's factors")
    if rho.subnormalized:
        raise ValueError("conditional entropy requires a normalized state")

    def entropy(m: np.ndarray) -> float:
        w = np.clip(np.linalg.eigvalsh(m), 0.0, None)
        w = w[w > 0]
        return float(-np.sum(w * np.log2(w)))

    s_ab = entropy(rho.matrix)
    s_b = entropy(rho.marginal(b_labels).matrix) if b_labels else 0.0
    return s_ab - s_b


def h_channel(chs, m: int, cfg: SolverConfig | None = None) -> float:
    """Average conditional max-entropy of the channels' Choi states.

    Each channel must act on m qubits; the entropy conditions on the noisy
    output side.  The result lies in [-m, m].
    """
    chs = list(chs)
    if not chs:
        raise ValueError("h_channel needs at least one channel")
    m = int(m)
    d = 2**m
    for ch in chs:
        if ch.d_in != d or ch.d_out != d:
            raise ValueError(f"channel dims ({ch.d_in}, {ch.d_out}) != block size {d}")
    total = 0.0
    for ch in chs:
        choi = choi_from_channel(ch)
        total += hmax_cond(choi, ["A"], ["B"], cfg).value
    h = total / len(chs)
    if h < -m - 1e-6 or h > m + 1e-6:
        raise RuntimeError(f"h = {h} escaped the theoretical range [-{m}, {m}]")
    return float(np.clip(h, -m, m))


def hmax_dephasing_closed_form(p: float) -> float:
    """Closed-form H_max(A|B) of the dephasing Choi state.

    The Choi state is Bell diagonal with weights (1-p/2, p/2) and is
    invariant under X(x)X and Z(x)Z conjugation, which forces an optimal
    conditioning state sigma = I/2; evaluating the objective there gives
    log2(1 + 2 sqrt((p/2)(1-p/2))) - 1.
    """
    if not 0 <= p <= 1:
        raise ValueError(f"dephasing parameter {p} outside [0, 1]")
    return float(np.log2(1 + 2 * np.sqrt((p / 2) * (1 - p / 2))) - 1)
