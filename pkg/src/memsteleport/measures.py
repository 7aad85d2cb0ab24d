"""Entanglement and mixedness figures of merit for two-qubit states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances
from .linalg import PAULI_Y, eigenvalues_hermitian, kron, partial_transpose
from .states import DensityOperator

_SPIN_FLIP = kron(PAULI_Y, PAULI_Y)

# Rank-one test applied to fidelity targets: the top eigenvalue must carry
# essentially all of the weight.
PURE_EIGENVALUE_MIN = 1.0 - 1e-10


@dataclass(frozen=True)
class EntanglementReport:
    concurrence: float
    signed_concurrence: float
    linear_entropy: float
    purity: float
    negativity: float
    ppt_positive: bool


def _require_two_qubits(rho: DensityOperator, what: str) -> np.ndarray:
    if rho.n_qubits != 2:
        raise ValueError(f"{what} is defined here for two-qubit states only")
    return rho.matrix


def concurrence(rho: DensityOperator) -> tuple[float, float]:
    """Concurrence together with its unclipped (signed) value.

    Square roots of the spin-flipped product spectrum, largest root minus the
    sum of the rest.  The signed value is what separability-threshold plots
    track below zero; the first element clips it at 0.

    The roots are computed as the singular values of L^T (Y x Y) L with
    rho = L L+, which equal the square roots of the spin-flipped product
    spectrum exactly.  Solving the textbook eigenproblem instead smears the
    spectrum's exact zeros by ~1e-17, which the square root amplifies to
    ~1e-9; the factored form never squares, so zero roots stay at machine
    precision.  State eigenvalues within the PSD tolerance of zero are
    treated as exact zeros when factoring L, and anything more negative is
    an error, not a clip.
    """
    m = _require_two_qubits(rho, "concurrence")
    tol = tolerances.current()
    w, v = np.linalg.eigh(m)
    if float(w[0]) < -tol.psd:
        raise ValueError(f"state spectrum negative beyond tolerance: {w[0]:.3e}")
    factor = v * np.sqrt(np.where(w <= tol.psd, 0.0, w))
    roots = np.linalg.svd(factor.T @ _SPIN_FLIP @ factor, compute_uv=False)
    signed = float(roots[0] - roots[1:].sum())
    return max(0.0, signed), signed


def purity(rho: DensityOperator) -> float:
    """Tr(rho^2)."""
    m = rho.matrix
    return float(np.trace(m @ m).real)


def linear_entropy(rho: DensityOperator) -> float:
    """Mixedness (4/3)(1 - Tr rho^2), spanning [0, 1] for two qubits.

    The 4/3 normalization is specific to dimension four, so other qubit
    counts are rejected rather than silently rescaled.
    """
    _require_two_qubits(rho, "linear entropy")
    return (4.0 / 3.0) * (1.0 - purity(rho))


def negativity(rho: DensityOperator) -> float:
    """Twice the total weight of negative partial-transpose eigenvalues.

    Normalized so a Bell state scores 1.  Positive exactly when the state
    fails the Peres-Horodecki criterion, which for two qubits is equivalent
    to being entangled.
    """
    m = _require_two_qubits(rho, "negativity")
    eigs = eigenvalues_hermitian(partial_transpose(m, 2, 0))
    return float(-2.0 * eigs[eigs < 0.0].sum())


def fidelity_pure(target: DensityOperator, out: DensityOperator) -> float:
    """Overlap <t|out|t> of a state with a pure target."""
    if target.n_qubits != out.n_qubits:
        raise ValueError("target and output must have the same qubit count")
    top = float(np.linalg.eigvalsh(target.matrix)[-1])
    if top < PURE_EIGENVALUE_MIN:
        raise ValueError(f"fidelity target must be pure; largest eigenvalue is {top:.12f}")
    overlap = complex(np.trace(target.matrix @ out.matrix))
    if abs(overlap.imag) > tolerances.current().imag:
        raise ValueError(f"fidelity has imaginary residue {overlap.imag:.3e}")
    return float(overlap.real)


def entanglement_report(rho: DensityOperator) -> EntanglementReport:
    """All scalar figures of merit for one state in a single record."""
    conc, signed = concurrence(rho)
    pur = purity(rho)
    neg = negativity(rho)
    return EntanglementReport(
        concurrence=conc,
        signed_concurrence=signed,
        linear_entropy=(4.0 / 3.0) * (1.0 - pur),
        purity=pur,
        negativity=neg,
        ppt_positive=neg <= tolerances.current().psd,
    )
