"""Two-qubit teleportation through pairs of boundary-entangled mixed channels.

The package simulates a three-party protocol in which a two-qubit state is
teleported through two independent noisy channel states drawn from the
families that maximize concurrence at fixed linear entropy.  It provides the
exact tensor-level simulation, closed-form laws for the surviving
entanglement and fidelity, random-state exploration utilities, and a CLI
(``memsteleport``) whose ``verify`` subcommand cross-checks simulation against
theory.
"""

__version__ = "0.1.0"

from .linalg import (
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    dagger,
    eigenvalues_general,
    eigenvalues_hermitian,
    is_hermitian,
    kron,
    partial_trace,
    partial_transpose,
    pauli,
    permute_qubits,
)
from .measures import (
    EntanglementReport,
    concurrence,
    entanglement_report,
    fidelity_pure,
    linear_entropy,
    negativity,
    purity,
)
from .states import (
    BELL_PHI_MINUS,
    BELL_PHI_PLUS,
    BELL_PSI_MINUS,
    BELL_PSI_PLUS,
    FAMILY_RANGES,
    BlochDecomposition,
    ChannelFamily,
    ChannelSpec,
    DensityOperator,
    TargetForm,
    TargetSpec,
    alpha_from_concurrence,
    bloch_assemble,
    bloch_decompose,
    boundary_concurrence,
    channel_state,
    family_curve,
    haar_random_unitary,
    make_mems,
    make_target,
    make_werner,
    random_density,
    random_density_sequence,
    simplex_weights,
    target_vector,
)
from .teleport import (
    LOCC_FIDELITY_BOUND,
    MEASURED_PAIRS,
    OUTPUT_QUBITS,
    BellProjector,
    ProtocolResult,
    analytic_c_out,
    analytic_fidelity,
    bell_state,
    closed_form_mems2_output,
    composite_state,
    effective_channel_output,
    fidelity_label_for_family,
    measure_pairs,
    outcome_averaged_fidelity,
    outcome_probabilities,
    simulated_threshold_r,
    sweep,
    teleport_general,
    teleport_rigid,
    threshold_r,
)
from .tolerances import Tolerances
from .verify import DEFAULT_SEED, CheckResult, run_all

__all__ = [
    "__version__",
    # linalg
    "IDENTITY_2",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "dagger",
    "eigenvalues_general",
    "eigenvalues_hermitian",
    "is_hermitian",
    "kron",
    "partial_trace",
    "partial_transpose",
    "pauli",
    "permute_qubits",
    # measures
    "EntanglementReport",
    "concurrence",
    "entanglement_report",
    "fidelity_pure",
    "linear_entropy",
    "negativity",
    "purity",
    # states
    "BELL_PHI_MINUS",
    "BELL_PHI_PLUS",
    "BELL_PSI_MINUS",
    "BELL_PSI_PLUS",
    "FAMILY_RANGES",
    "BlochDecomposition",
    "ChannelFamily",
    "ChannelSpec",
    "DensityOperator",
    "TargetForm",
    "TargetSpec",
    "alpha_from_concurrence",
    "bloch_assemble",
    "bloch_decompose",
    "boundary_concurrence",
    "channel_state",
    "family_curve",
    "haar_random_unitary",
    "make_mems",
    "make_target",
    "make_werner",
    "random_density",
    "random_density_sequence",
    "simplex_weights",
    "target_vector",
    # teleport
    "LOCC_FIDELITY_BOUND",
    "MEASURED_PAIRS",
    "OUTPUT_QUBITS",
    "BellProjector",
    "ProtocolResult",
    "analytic_c_out",
    "analytic_fidelity",
    "bell_state",
    "closed_form_mems2_output",
    "composite_state",
    "effective_channel_output",
    "fidelity_label_for_family",
    "measure_pairs",
    "outcome_averaged_fidelity",
    "outcome_probabilities",
    "simulated_threshold_r",
    "sweep",
    "teleport_general",
    "teleport_rigid",
    "threshold_r",
    # tolerances / verify
    "Tolerances",
    "DEFAULT_SEED",
    "CheckResult",
    "run_all",
]
