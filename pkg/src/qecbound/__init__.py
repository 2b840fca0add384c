"""One-shot error bounds for storing hybrid classical-quantum information
in noisy qubits: conditional max-entropy optimization, achievability
checks, closed-form bound formulas, and reproducible bound datasets."""

__version__ = "0.1.0"

from .capacity import (
    BlockEncodingState,
    CapacityTuple,
    RatePoint,
    Theorem1Result,
    asymptotic_boundary,
    error_bound,
    min_delta_pair,
    noisy_rqc_bound,
    region_grid,
    theorem1_check,
)
from .entropy import (
    EntropyResult,
    SolverConfig,
    conditional_fidelity,
    h_channel,
    hmax_cond,
    hmax_dephasing_closed_form,
    purified_distance,
    purified_fidelity,
    von_neumann_cond,
)
from .linalg import (
    EigResult,
    herm_eig,
    kron,
    partial_trace,
    psd_sqrt,
    trace_norm,
    unitary_from_hamiltonian,
)
from .quantum import (
    HeisenbergCouplings,
    MultipartiteState,
    QuantumChannel,
    amplitude_damping,
    apply_channel,
    channel_from_choi,
    choi_from_channel,
    classical_corr,
    dephasing,
    heisenberg_channel,
    hybrid_source,
    identity_channel,
    max_entangled,
    tensor_channel,
)
from .scenarios import (
    BaselineCase,
    ChaosConfig,
    DimensionLimitError,
    ScenarioDataset,
    baseline_bruteforce,
    baseline_case_id,
    baseline_closed_form,
    baseline_dataset,
    chaos_error_curve,
    rqc_noisy_sweep,
    rqc_region_dataset,
    sample_couplings,
)
