"""End-to-end bound datasets: rate-region grids, noisy-encoder sweeps,
no-encoding baselines, and thermal-bath chaos curves.

Datasets are small tabular objects with fixed column contracts:

    region.csv      c,q,h,delta1,delta2,delta_bound,inside_asymptotic
    noisy_sweep.csv N,c,q,case_i_baseline,case_ii_noiseless,case_iii_noisy
    chaos.csv       t,p,mean_bound,std_bound,samples,flagged
    baseline.csv    noise,param,c,q,N,case_id,closed_form,bruteforce

Numeric fields serialize with 17 significant digits so re-parsing is exact.
In chaos.csv a final row with t = -1 carries the time averages (mean of the
clamped per-time means, std across times).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .capacity import RatePoint, error_bound, noisy_rqc_bound, region_grid
from .entropy import SolverConfig, h_channel, hmax_cond, von_neumann_cond
from .linalg import trace_norm
from .quantum import (
    HeisenbergCouplings,
    MultipartiteState,
    amplitude_damping,
    apply_channel,
    choi_from_channel,
    classical_corr,
    dephasing,
    heisenberg_channel,
    max_entangled,
    tensor_channel,
)

# Brute-force baselines construct the full source-plus-reference operator.
MAX_BRUTEFORCE_DIM = 2**12

NOISE_KINDS = ("dephasing", "amp_damp")


class DimensionLimitError(RuntimeError):
    """Raised when a brute-force construction would exceed the size cap."""


def make_noise(kind: str, param: float):
    if kind == "dephasing":
        return dephasing(param)
    if kind == "amp_damp":
        return amplitude_damping(param)
    raise ValueError(f"unknown noise kind {kind!r}; expected one of {NOISE_KINDS}")


@dataclass(frozen=True)
class ScenarioDataset:
    """Tabular result rows plus the parameters that produced them."""

    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    meta: dict = field(default_factory=dict)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([_format_cell(x) for x in row])

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _format_cell(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    if x is None:
        return ""
    return str(x)


@dataclass(frozen=True)
class ChaosConfig:
    """Monte-Carlo setup for the thermal-bath chaos curves."""

    p: float
    t_grid: tuple[float, ...]
    n_pairs: int
    c: float = 0.0
    q: float = 0.5
    samples: int = 50
    coupling_mean: float = 1.0
    coupling_std: float = 0.25
    seed: int = 0

    def __post_init__(self):
        if not 0.5 <= self.p <= 1:
            raise ValueError(f"bath population {self.p} outside [0.5, 1]")
        if not self.t_grid:
            raise ValueError("t_grid must be nonempty")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        object.__setattr__(self, "t_grid", tuple(float(t) for t in self.t_grid))


@dataclass(frozen=True)
class BaselineCase:
    """A no-encoding storage configuration for one of the two noise models."""

    noise_kind: str
    param: float
    pt: RatePoint
    n_qubits: int

    def __post_init__(self):
        if self.noise_kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.noise_kind!r}")
        if not 0 <= self.param <= 1:
            raise ValueError(f"noise parameter {self.param} outside [0, 1]")
        if self.n_qubits < 0:
            raise ValueError("n_qubits must be nonnegative")


def baseline_case_id(pt: RatePoint) -> int:
    """1: c >= 1; 2: c < 1 and c + q > 1; 3: c < 1 and c + q <= 1."""
    if pt.c >= 1:
        return 1
    if pt.c + pt.q > 1:
        return 2
    return 3


def baseline_closed_form(case: BaselineCase) -> float:
    """Closed-form lower bound on the error of storing without encoding.

    The storage strategy keeps as much classical information as possible in
    the noisy qubits and guesses whatever does not fit.
    """
    c, q = case.pt.c, case.pt.q
    n = case.n_qubits
    x = case.param
    cid = baseline_case_id(case.pt)
    if case.noise_kind == "dephasing":
        if cid == 1:
            return 1 - 2.0 ** (-(c - 1 + 2 * q) * n)
        if cid == 2:
            return 1 - (1 - x / 2) ** ((1 - c) * n) * 2.0 ** (-2 * (q + c - 1) * n)
        return 1 - (1 - x / 2) ** (q * n)
    root = (1 + math.sqrt(1 - x)) / 2
    if cid == 1:
        return 1 - 2.0 ** (-(c - 1 + 2 * q) * n) * (1 - x / 2) ** n
    if cid == 2:
        return (
            1
            - 2.0 ** (-2 * (q + c - 1) * n)
            * (1 - x / 2) ** (c * n)
            * root ** (2 * (1 - c) * n)
        )
    return 1 - (1 - x / 2) ** (c * n) * root ** (2 * q * n)


def _int_rate(value: float, name: str) -> int:
    out = round(value)
    if abs(value - out) > 1e-9:
        raise ValueError(f"{name} = {value} must be an integer for brute force")
    return int(out)


def _ket0_projector(n_qubits: int) -> np.ndarray:
    d = 2**n_qubits
    m = np.zeros((d, d), dtype=complex)
    m[0, 0] = 1.0
    return m


def _mixed(n_qubits: int) -> np.ndarray:
    d = 2**n_qubits
    return np.eye(d, dtype=complex) / d


def _noisy_half(state: MultipartiteState, ch, copies: int) -> np.ndarray:
    """Apply ch^(x)copies to the first factor of a two-factor state."""
    if copies == 0:
        return state.matrix
    return apply_channel(tensor_channel([ch] * copies), state, state.labels[0]).matrix


def baseline_bruteforce(case: BaselineCase) -> float:
    """Exact trace-distance error of the no-encoding storage strategy.

    Builds the ideal source-plus-reference state and the stored-then-noised
    state explicitly (guessed registers fixed to all-zeros) and returns half
    the trace norm of the difference.  Requires integer bit/qubit counts and
    a total dimension of at most 2^12.
    """
    c_bits = _int_rate(case.pt.c * case.n_qubits, "c*N")
    q_qubits = _int_rate(case.pt.q * case.n_qubits, "q*N")
    n = case.n_qubits
    dim = 4 ** (c_bits + q_qubits)
    if dim > MAX_BRUTEFORCE_DIM:
        raise DimensionLimitError(
            f"brute-force dimension {dim} exceeds cap {MAX_BRUTEFORCE_DIM}"
        )
    ch = make_noise(case.noise_kind, case.param)
    cid = baseline_case_id(case.pt)

    if cid == 3:
        # Everything fits: noise acts on all stored registers.
        omega = classical_corr(c_bits)
        phi = max_entangled(q_qubits)
        ideal = np.kron(omega.matrix, phi.matrix)
        psi = np.kron(_noisy_half(omega, ch, c_bits), _noisy_half(phi, ch, q_qubits))
    elif cid == 2:
        # All classical and (N - cN) qubits stored; the rest guessed.
        stored_q = n - c_bits
        guessed_q = q_qubits - stored_q
        omega = classical_corr(c_bits)
        phi_s = max_entangled(stored_q)
        phi_g = max_entangled(guessed_q)
        ideal = np.kron(np.kron(omega.matrix, phi_s.matrix), phi_g.matrix)
        guess = np.kron(_ket0_projector(guessed_q), _mixed(guessed_q))
        psi = np.kron(
            np.kron(_noisy_half(omega, ch, c_bits), _noisy_half(phi_s, ch, stored_q)),
            guess,
        )
    else:
        # Only N classical bits stored; remaining bits and all qubits guessed.
        stored_c = n
        guessed_c = c_bits - stored_c
        omega_s = classical_corr(stored_c)
        omega_g = classical_corr(guessed_c)
        phi = max_entangled(q_qubits)
        ideal = np.kron(np.kron(omega_s.matrix, omega_g.matrix), phi.matrix)
        guess_c = np.kron(_ket0_projector(guessed_c), _mixed(guessed_c))
        guess_q = np.kron(_ket0_projector(q_qubits), _mixed(q_qubits))
        psi = np.kron(np.kron(_noisy_half(omega_s, ch, stored_c), guess_c), guess_q)

    return 0.5 * trace_norm(ideal - psi)


# ---------------------------------------------------------------------------
# dataset builders

REGION_COLUMNS = ("c", "q", "h", "delta1", "delta2", "delta_bound", "inside_asymptotic")
SWEEP_COLUMNS = ("N", "c", "q", "case_i_baseline", "case_ii_noiseless", "case_iii_noisy")
CHAOS_COLUMNS = ("t", "p", "mean_bound", "std_bound", "samples", "flagged")
BASELINE_COLUMNS = ("noise", "param", "c", "q", "N", "case_id", "closed_form", "bruteforce")

TIME_AVERAGE_SENTINEL = -1.0


def rqc_region_dataset(
    noise_kind: str,
    param: float,
    n_qubits: int,
    grid,
    cfg: SolverConfig | None = None,
) -> ScenarioDataset:
    """Error-bound surface over a (c, q) rate grid for i.i.d. single-qubit noise."""
    ch = make_noise(noise_kind, param)
    choi = choi_from_channel(ch)
    h = h_channel([ch], 1, cfg)
    h_vn = von_neumann_cond(choi, ["A"], ["B"])
    rows = region_grid(h, h_vn, 1, n_qubits, grid)
    meta = {
        "noise": noise_kind,
        "param": param,
        "N": n_qubits,
        "h": h,
        "h_vn": h_vn,
        "grid_size": len(rows),
    }
    return ScenarioDataset(REGION_COLUMNS, tuple(rows), meta)


def rqc_noisy_sweep(
    p: float,
    f: float,
    c: float,
    q_list,
    n_range,
    cfg: SolverConfig | None = None,
) -> ScenarioDataset:
    """Baseline vs noiseless vs noisy-circuit error bounds for dephasing noise.

    Column (i) is the no-encoding closed form, (ii) the noiseless-encoder
    bound, (iii) the noisy-encoder bound with per-gate fidelity f and
    ceil(N^(3/2)) gates.
    """
    h = h_channel([dephasing(p)], 1, cfg)
    rows = []
    for q in q_list:
        pt = RatePoint(c, q)
        for n in n_range:
            base = baseline_closed_form(BaselineCase("dephasing", p, pt, n))
            noiseless = error_bound(pt, h, 1, n)
            noisy = noisy_rqc_bound(pt, h, 1, n, f)
            rows.append((int(n), c, q, base, noiseless, noisy))
    meta = {"noise": "dephasing", "param": p, "f": f, "c": c, "h": h}
    return ScenarioDataset(SWEEP_COLUMNS, tuple(rows), meta)


def sample_couplings(
    seed: int, t_index: int, sample_index: int, mean: float, std: float
) -> HeisenbergCouplings:
    """Six independent Gaussian couplings keyed by (seed, t_index, sample_index)."""
    if std < 0:
        raise ValueError("std must be nonnegative")
    draws = [
        rng.gaussian(seed, t_index, sample_index, comp, mean=mean, std=std)
        for comp in range(6)
    ]
    return HeisenbergCouplings(tuple(draws[:3]), tuple(draws[3:]))


def chaos_error_curve(cfg: ChaosConfig, solver: SolverConfig | None = None) -> ScenarioDataset:
    """Average error bound of a scrambled 2n-qubit system under bath noise.

    For each time t, ``samples`` coupling vectors are drawn; each gives a
    two-qubit bath channel whose Choi-state conditional max-entropy h0 sets
    the per-sample bound 2^((2q + h0/2 - 1) N / 4) with N = 2n.  Means are
    clamped to 1 after averaging; a trailing row (t = -1) carries the
    time-averaged mean.  Rows where the entropy solver did not converge are
    flagged and the run continues.
    """
    solver = solver or SolverConfig(tol=1e-8, max_iter=2000)
    n_qubits = 2 * cfg.n_pairs
    prefactor = 1.0
    if cfg.c != 0:
        prefactor = math.sqrt(1 + 2.0 ** (cfg.c * n_qubits / 2))
    rows = []
    clamped_means = []
    any_flagged = False
    for t_idx, t in enumerate(cfg.t_grid):
        terms = np.empty(cfg.samples)
        flagged = False
        for s_idx in range(cfg.samples):
            couplings = sample_couplings(
                cfg.seed, t_idx, s_idx, cfg.coupling_mean, cfg.coupling_std
            )
            choi = choi_from_channel(heisenberg_channel(cfg.p, t, couplings))
            res = hmax_cond(choi, ["A"], ["B"], solver)
            if not res.converged:
                flagged = True
            h0 = min(max(res.value, -2.0), 2.0)
            terms[s_idx] = prefactor * 2.0 ** ((2 * cfg.q + h0 / 2 - 1) * n_qubits / 4)
        mean = min(float(np.mean(terms)), 1.0)
        std = float(np.std(terms, ddof=1)) if cfg.samples > 1 else 0.0
        rows.append((t, cfg.p, mean, std, cfg.samples, int(flagged)))
        clamped_means.append(mean)
        any_flagged = any_flagged or flagged
    avg = float(np.mean(clamped_means))
    spread = float(np.std(clamped_means, ddof=1)) if len(clamped_means) > 1 else 0.0
    rows.append(
        (
            TIME_AVERAGE_SENTINEL,
            cfg.p,
            avg,
            spread,
            cfg.samples * len(cfg.t_grid),
            int(any_flagged),
        )
    )
    meta = {
        "p": cfg.p,
        "n_pairs": cfg.n_pairs,
        "c": cfg.c,
        "q": cfg.q,
        "samples": cfg.samples,
        "coupling_mean": cfg.coupling_mean,
        "coupling_std": cfg.coupling_std,
        "seed": cfg.seed,
        "t_grid": list(cfg.t_grid),
        "flagged": any_flagged,
    }
    return ScenarioDataset(CHAOS_COLUMNS, tuple(rows), meta)


def baseline_dataset(cases, with_bruteforce: bool = False) -> ScenarioDataset:
    """Closed-form (and optionally brute-force) baselines for a list of cases."""
    rows = []
    for case in cases:
        closed = baseline_closed_form(case)
        brute = baseline_bruteforce(case) if with_bruteforce else None
        rows.append(
            (
                case.noise_kind,
                case.param,
                case.pt.c,
                case.pt.q,
                case.n_qubits,
                baseline_case_id(case.pt),
                closed,
                brute,
            )
        )
    return ScenarioDataset(BASELINE_COLUMNS, tuple(rows), {"bruteforce": with_bruteforce})
