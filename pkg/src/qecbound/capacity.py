"""One-shot achievability conditions and error-bound formulas.

``theorem1_check`` evaluates the three entropic achievability inequalities
for an explicit block-encoding state under a given noise; the remaining
functions are the closed-form reductions for random-unitary encoders acting
on N = m*n qubits with i.i.d. m-qubit noise:

    delta_1 = (1 + 1/(J-1)) * 2^((c + 2q + h/m - 1) N)
    delta_2 = 2^((2q + h/m - 1) N)
    delta   = sqrt(sqrt(delta_1) + sqrt(delta_2))     (clamped to 1)

with h the per-block conditional max-entropy of the noise's Choi state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entropy import EntropyResult, SolverConfig, hmax_cond
from .quantum import MultipartiteState, QuantumChannel, apply_channel

_LOG2_SLACK = 1e-9  # tolerance when comparing rate inequalities


@dataclass(frozen=True)
class CapacityTuple:
    """Rates of a hybrid storage task: C classical bits, Q qubits, E ebits.

    ``epsilon`` only enters the error formula (entropies are evaluated
    unsmoothed, which is conservative); ``j_alphabet`` is the size of the
    enlarged classical alphabet used by the encoder.
    """

    c_bits: float
    q_qubits: float
    e_ebits: float
    epsilon: float = 0.0
    j_alphabet: float = 2.0

    def __post_init__(self):
        if min(self.c_bits, self.q_qubits, self.e_ebits) < 0:
            raise ValueError("rates must be nonnegative")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.j_alphabet < max(2.0, 2.0**self.c_bits):
            raise ValueError("alphabet size must be at least max(2, 2^C)")


@dataclass(frozen=True)
class RatePoint:
    """Classical and quantum storage rates per noisy qubit."""

    c: float
    q: float

    def __post_init__(self):
        if not 0 <= self.c <= 2:
            raise ValueError(f"classical rate {self.c} outside [0, 2]")
        if not 0 <= self.q <= 1:
            raise ValueError(f"quantum rate {self.q} outside [0, 1]")


@dataclass(frozen=True)
class BlockEncodingState:
    """Family of J encoding Choi states rho_j on (Sr, A), one per symbol.

    The classical register Sc indexes the block; the block average must
    have a completely mixed marginal on Sc (x) Sr.
    """

    blocks: tuple[MultipartiteState, ...]

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if len(blocks) < 2:
            raise ValueError("need at least two blocks (J >= 2)")
        dims = blocks[0].dims
        for b in blocks:
            if len(b.dims) != 2:
                raise ValueError("each block must have exactly two factors (Sr, A)")
            if b.dims != dims:
                raise ValueError("all blocks must share the same (Sr, A) dims")
        # The S = Sc (x) Sr marginal of the block average is block diagonal
        # with blocks rho_j^{Sr}/J, so complete mixedness on S is equivalent
        # to every block having a completely mixed Sr marginal.
        pi = np.eye(dims[0]) / dims[0]
        for b in blocks:
            if np.max(np.abs(b.marginal(b.labels[0]).matrix - pi)) > 1e-8:
                raise ValueError("block-average marginal on S is not completely mixed")
        object.__setattr__(self, "blocks", blocks)

    @property
    def j(self) -> int:
        return len(self.blocks)

    @property
    def d_sr(self) -> int:
        return self.blocks[0].dims[0]

    @property
    def d_a(self) -> int:
        return self.blocks[0].dims[1]

    def joint_state(self) -> MultipartiteState:
        """(1/J) sum_j |j><j|_Sc (x) rho_j on factors (Sc, Sr, A)."""
        j = self.j
        d = self.d_sr * self.d_a
        m = np.zeros((j * d, j * d), dtype=complex)
        for k, b in enumerate(self.blocks):
            m[k * d : (k + 1) * d, k * d : (k + 1) * d] = b.matrix / j
        return MultipartiteState(m, ("Sc", "Sr", "A"), (j, self.d_sr, self.d_a))


@dataclass(frozen=True)
class Theorem1Result:
    achievable: bool
    delta_bound: float
    conditions: dict = field(repr=False)
    hmax_s_b: EntropyResult = field(repr=False)
    hmax_sr_bsc: EntropyResult = field(repr=False)


def theorem1_check(
    enc: BlockEncodingState,
    noise: QuantumChannel,
    tup: CapacityTuple,
    delta1: float,
    delta2: float,
    cfg: SolverConfig | None = None,
) -> Theorem1Result:
    """Evaluate the one-shot achievability conditions for an explicit encoder.

    Applies the noise to the A factor of the block state, computes
    H_max(Sc Sr | B) and H_max(Sr | B Sc), and checks

        Q + E         <= log2 d_Sr
        C + Q - E     <= -H_max(Sc Sr|B) + log2(J-1) + log2(delta_1)
        Q - E         <= -H_max(Sr|B Sc) + log2(delta_2)

    The reported error is sqrt(sqrt(delta_1) + sqrt(delta_2) + 4 epsilon).
    For C = 0 the middle condition is dropped and delta_1 is forced to 0.
    """
    if delta2 <= 0 or (tup.c_bits > 0 and delta1 <= 0):
        raise ValueError("delta1 and delta2 must be positive")
    if noise.d_in != enc.d_a:
        raise ValueError(f"noise input dim {noise.d_in} != encoder A dim {enc.d_a}")
    if enc.j != int(round(tup.j_alphabet)):
        raise ValueError("alphabet size must match the number of blocks")

    rho = enc.joint_state()
    rho_n = apply_channel(noise, rho, "A")  # factor A becomes the output B
    rho_n = MultipartiteState(rho_n.matrix, ("Sc", "Sr", "B"), rho_n.dims)

    h_s_b = hmax_cond(rho_n, ["Sc", "Sr"], ["B"], cfg)
    h_sr_bsc = hmax_cond(rho_n, ["Sr"], ["B", "Sc"], cfg)

    c, q, e, j = tup.c_bits, tup.q_qubits, tup.e_ebits, tup.j_alphabet
    cond1 = q + e <= math.log2(enc.d_sr) + _LOG2_SLACK
    cond3 = q - e <= -h_sr_bsc.value + math.log2(delta2) + _LOG2_SLACK
    if c > 0:
        cond2 = q + c - e <= -h_s_b.value + math.log2(j - 1) + math.log2(delta1) + _LOG2_SLACK
        d1 = delta1
    else:
        cond2 = True
        d1 = 0.0
    bound = math.sqrt(math.sqrt(d1) + math.sqrt(delta2) + 4 * tup.epsilon)
    conditions = {
        "dimension": cond1,
        "classical": cond2,
        "quantum": cond3,
        "hmax_s_b": h_s_b.value,
        "hmax_sr_bsc": h_sr_bsc.value,
    }
    return Theorem1Result(
        achievable=bool(cond1 and cond2 and cond3),
        delta_bound=bound,
        conditions=conditions,
        hmax_s_b=h_s_b,
        hmax_sr_bsc=h_sr_bsc,
    )


def min_delta_pair(
    pt: RatePoint, h: float, m: int, n_blocks: int, j_alphabet: float = math.inf
) -> tuple[float, float]:
    """Smallest (delta_1, delta_2) satisfying the two rate inequalities."""
    _check_h(h, m)
    n_qubits = m * n_blocks
    factor = 1.0 if math.isinf(j_alphabet) else 1.0 + 1.0 / (j_alphabet - 1.0)
    delta1 = factor * _pow2((pt.c + 2 * pt.q + h / m - 1) * n_qubits)
    delta2 = _pow2((2 * pt.q + h / m - 1) * n_qubits)
    return delta1, delta2


def error_bound(pt: RatePoint, h: float, m: int, n_blocks: int) -> float:
    """Recovery-error bound for random-unitary encoding, clamped to 1.

    The c = 0 case drops the classical prefactor entirely, so the bound is
    discontinuous at c = 0 by exactly a factor sqrt(2).
    """
    _check_h(h, m)
    n_qubits = m * n_blocks
    base = _pow2((2 * pt.q + h / m - 1) * n_qubits / 4)
    if pt.c == 0:
        return min(base, 1.0)
    prefactor = math.sqrt(1 + _pow2(pt.c * n_qubits / 2))
    return min(prefactor * base, 1.0)


def noisy_rqc_bound(
    pt: RatePoint,
    h: float,
    m: int,
    n_blocks: int,
    f: float,
    g_rule=None,
) -> float:
    """Error bound when the encoding circuit itself is noisy.

    Each of the G gates succeeds with fidelity f; with probability f^G the
    circuit acts ideally and the noiseless bound applies.  G defaults to
    ceil(N^(3/2)) for N noisy qubits.
    """
    if not 0 < f <= 1:
        raise ValueError(f"gate fidelity {f} outside (0, 1]")
    n_qubits = m * n_blocks
    gates = int(g_rule(n_qubits)) if g_rule is not None else math.ceil(n_qubits**1.5)
    inner = error_bound(pt, h, m, n_blocks)
    fg = f**gates
    return min((1 - fg) + fg * inner, 1.0)


def asymptotic_boundary(h_vn: float, m: int):
    """Predicate for the asymptotically correctable rate region.

    A rate point is inside iff c + 2q <= 1 - h_vn/m and 2q <= 1 - h_vn/m,
    with h_vn the conditional von Neumann entropy per block of the noise's
    Choi state.  This is the i.i.d. limit of the one-shot conditions.
    """
    _check_h(h_vn, m)
    limit = 1 - h_vn / m

    def inside(pt: RatePoint) -> bool:
        return (pt.c + 2 * pt.q <= limit + _LOG2_SLACK) and (
            2 * pt.q <= limit + _LOG2_SLACK
        )

    return inside


def region_grid(h: float, h_vn: float, m: int, n_blocks: int, grid) -> list[tuple]:
    """Rows (c, q, h, delta1, delta2, delta_bound, inside_asymptotic) per point.

    ``h`` and ``h_vn`` are the max- and von Neumann conditional entropies of
    the per-block Choi state; the alphabet factor uses the large-J limit,
    and delta_1 is 0 whenever c = 0.
    """
    inside = asymptotic_boundary(h_vn, m)
    rows = []
    for pt in grid:
        d1, d2 = min_delta_pair(pt, h, m, n_blocks)
        if pt.c == 0:
            d1 = 0.0
        bound = min(math.sqrt(math.sqrt(d1) + math.sqrt(d2)), 1.0)
        rows.append((pt.c, pt.q, h, d1, d2, bound, int(inside(pt))))
    return rows


def _check_h(h: float, m: int) -> None:
    if m <= 0:
        raise ValueError("block size m must be positive")
    if not -m - 1e-9 <= h <= m + 1e-9:
        raise ValueError(f"entropy {h} outside [-{m}, {m}]")


def _pow2(x: float) -> float:
    try:
        return 2.0**x
    except OverflowError:
        return math.inf
