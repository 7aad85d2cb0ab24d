"""Bell-measurement protocol engine plus its closed-form cross-checks.

Wire layout of the six-qubit composite register, most significant first::

    0: a1   1: a2      the two qubits of the target state
    2: b1   3: b2      first channel pair  (b1 is measured together with a1)
    4: b3   5: b4      second channel pair (b3 is measured together with a2)

The teleported output lives on (b2, b4).  A measurement outcome is a pair
(mu, nu) with each index in 1..4 labelling the Bell vectors
(sigma_mu x 1)|Psi+>; outcome (1, 1) is the rigid double |Phi+> projection.

Two independent evaluation paths are provided on purpose: the literal
six-qubit tensor projection (``teleport_rigid`` / ``teleport_general``) and a
single-qubit operator decomposition of each channel
(``effective_channel_output``) that never builds anything larger than 4x4.
Agreement between the two is one of the package's standing verification
checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from . import tolerances
from .linalg import (
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    kron,
    partial_trace,
    pauli,
    permute_qubits,
)
from .measures import concurrence, fidelity_pure
from .states import (
    BELL_PSI_PLUS,
    ChannelFamily,
    ChannelSpec,
    DensityOperator,
    TargetForm,
    TargetSpec,
    alpha_from_concurrence,
    channel_state,
    make_mems,
    make_target,
)

MEASURED_PAIRS: tuple[tuple[int, int], tuple[int, int]] = ((0, 2), (1, 4))
OUTPUT_QUBITS: tuple[int, int] = (3, 5)

# kron() below assembles the projector in wire order (a1, b1, a2, b3, b2, b4);
# this permutation rewrites it in the global order (a1, a2, b1, b2, b3, b4).
_TO_GLOBAL_ORDER = (0, 2, 1, 4, 3, 5)

# Undoing outcome mu on a measured pair means conjugating the partner output
# qubit with sigma_mu sigma_x, which is again a single Pauli up to a phase
# that conjugation ignores.  Outcome 1 (the |Phi+> projection) needs nothing.
_CORRECTIONS: dict[int, tuple[str, np.ndarray]] = {
    1: ("I", IDENTITY_2),
    2: ("Z", PAULI_Z),
    3: ("Y", PAULI_Y),
    4: ("X", PAULI_X),
}

LOCC_FIDELITY_BOUND = 2.0 / 3.0  # best classical-resource teleportation fidelity


def bell_state(mu: int) -> np.ndarray:
    """Bell basis vector (sigma_mu x 1)|Psi+>; mu = 1 gives |Phi+>."""
    return kron(pauli(mu), IDENTITY_2) @ BELL_PSI_PLUS


@dataclass(frozen=True, eq=False)
class BellProjector:
    """Rank-one Bell projector tagged with the wire pair it measures."""

    mu: int
    pair: tuple[int, int]

    def __post_init__(self) -> None:
        if self.mu not in (1, 2, 3, 4):
            raise ValueError(f"Bell outcome index must be in 1..4, got {self.mu!r}")

    @property
    def matrix(self) -> np.ndarray:
        v = bell_state(self.mu)
        return np.outer(v, v.conj())


def _check_outcome(index: int) -> None:
    if index not in (1, 2, 3, 4):
        raise ValueError(f"Bell outcome index must be in 1..4, got {index!r}")


@lru_cache(maxsize=None)
def _outcome_projector(mu: int, nu: int) -> np.ndarray:
    embedded = kron(
        BellProjector(mu, MEASURED_PAIRS[0]).matrix,
        BellProjector(nu, MEASURED_PAIRS[1]).matrix,
        np.eye(4, dtype=complex),
    )
    return permute_qubits(embedded, 6, _TO_GLOBAL_ORDER)


def composite_state(target: TargetSpec, ch1: ChannelSpec, ch2: ChannelSpec) -> np.ndarray:
    """Six-qubit input: target on (a1, a2), channels on (b1, b2) and (b3, b4)."""
    return kron(
        make_target(target).matrix,
        channel_state(ch1).matrix,
        channel_state(ch2).matrix,
    )


def measure_pairs(rho6: np.ndarray, mu: int, nu: int) -> tuple[np.ndarray, float]:
    """Project (a1, b1) and (a2, b3) onto Bell outcomes and keep (b2, b4).

    Returns the normalized two-qubit output matrix together with the outcome
    probability.  Outcomes whose probability falls below the probability
    tolerance are rejected instead of being normalized into noise.
    """
    _check_outcome(mu)
    _check_outcome(nu)
    proj = _outcome_projector(mu, nu)
    tol = tolerances.current()
    raw = complex(np.trace(proj @ rho6))
    if abs(raw.imag) > tol.imag:
        raise ValueError(f"outcome probability has imaginary residue {raw.imag:.3e}")
    prob = raw.real
    if prob < tol.prob:
        raise ValueError(f"outcome ({mu}, {nu}) has degenerate probability {prob:.3e}")
    reduced = partial_trace(proj @ rho6 @ proj, 6, OUTPUT_QUBITS) / prob
    return reduced, prob


@dataclass(frozen=True, eq=False)
class ProtocolResult:
    """One protocol run: output state, outcome bookkeeping, figures of merit."""

    output_state: DensityOperator
    probability: float
    c_out: float
    c_out_signed: float
    fidelity: float | None  # populated for pure targets only
    outcome: tuple[int, int]
    correction_applied: tuple[str, str]


def _pure_target_or_none(target: TargetSpec) -> DensityOperator | None:
    state = make_target(target)
    if float(np.linalg.eigvalsh(state.matrix)[-1]) >= 1.0 - 1e-10:
        return state
    return None


def teleport_general(
    target: TargetSpec,
    ch1: ChannelSpec,
    ch2: ChannelSpec,
    outcome: tuple[int, int],
    apply_correction: bool = True,
) -> ProtocolResult:
    """Run the protocol for one Bell outcome, undoing the by-product by default.

    With ideal (r = 1) high-entanglement channels every corrected outcome
    reproduces the target exactly; that property pins the correction table.
    """
    mu, nu = outcome
    reduced, prob = measure_pairs(composite_state(target, ch1, ch2), mu, nu)
    labels = ("I", "I")
    if apply_correction:
        label1, op1 = _CORRECTIONS[mu]
        label2, op2 = _CORRECTIONS[nu]
        u = np.kron(op1, op2)
        reduced = u @ reduced @ u.conj().T
        labels = (label1, label2)
    output = DensityOperator(reduced, 2)
    c, signed = concurrence(output)
    pure = _pure_target_or_none(target)
    fid = fidelity_pure(pure, output) if pure is not None else None
    return ProtocolResult(output, prob, c, signed, fid, (mu, nu), labels)


def teleport_rigid(target: TargetSpec, ch1: ChannelSpec, ch2: ChannelSpec) -> ProtocolResult:
    """Double |Phi+> projection with no by-product correction applied."""
    return teleport_general(target, ch1, ch2, (1, 1), apply_correction=False)


def outcome_probabilities(target: TargetSpec, ch1: ChannelSpec, ch2: ChannelSpec) -> np.ndarray:
    """4x4 table of Bell outcome probabilities; entry [mu-1, nu-1] is p(mu, nu)."""
    rho6 = composite_state(target, ch1, ch2)
    table = np.empty((4, 4), dtype=float)
    for mu in range(1, 5):
        for nu in range(1, 5):
            table[mu - 1, nu - 1] = float(np.trace(_outcome_projector(mu, nu) @ rho6).real)
    return table


def effective_channel_output(target: TargetSpec, family: ChannelFamily, r: float) -> DensityOperator:
    """Rigid-outcome output via the single-qubit operator decomposition.

    Both channels share the same family and quality.  Each channel is split
    into the four 2x2 blocks indexed by its measured qubit; the double Bell
    projection then reduces to sixteen expectation values per pair, i.e. to
    4x4 algebra only.  Must agree with ``teleport_rigid`` to full precision
    -- the two paths share no intermediate code.
    """
    if target.form not in (TargetForm.PHI, TargetForm.PSI):
        raise ValueError("the decomposition path needs a PHI- or PSI-form target")
    rho_in = make_target(target).matrix
    ch = make_mems(ChannelSpec(family, r)).matrix
    # blocks[l, lp] is the output-qubit operator the measured pair turns
    # |l><lp| into (x2; overall factors cancel in the normalization).
    blocks = ch.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3)
    out = np.zeros((4, 4), dtype=complex)
    for l, m, lp, mp in itertools.product(range(2), repeat=4):
        weight = rho_in[2 * l + m, 2 * lp + mp]
        if weight != 0.0:
            out = out + weight * np.kron(blocks[l, lp], blocks[m, mp])
    return DensityOperator(out / np.trace(out).real, 2)


def closed_form_mems2_output(form: TargetForm, alpha: float, r: float) -> np.ndarray:
    """Hand-derived rigid output for equal fixed-population (mems2) channels.

    The PHI-form result is always separable; the PSI-form result is free of
    even-parity populations and stays entangled whenever alpha is strictly
    between the Schmidt extremes and r > 0.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    ChannelSpec(ChannelFamily.MEMS2, r)  # range check
    beta = np.sqrt(max(0.0, 1.0 - alpha * alpha))
    coherence = 9.0 * r * r * alpha * beta
    if form is TargetForm.PHI:
        den = 1.0 + 3.0 * alpha * alpha
        m = np.diag([alpha * alpha, alpha * alpha, alpha * alpha, 1.0]).astype(complex)
        m[0, 3] = m[3, 0] = coherence / 4.0
        return m / den
    if form is TargetForm.PSI:
        m = np.zeros((4, 4), dtype=complex)
        m[1, 1] = alpha * alpha / 2.0
        m[2, 2] = (1.0 - alpha * alpha) / 2.0
        m[3, 3] = 0.5
        m[1, 2] = m[2, 1] = coherence / 8.0
        return m
    raise ValueError("closed forms exist for the PHI and PSI forms only")


def analytic_c_out(family: ChannelFamily, r: float, c_in: float) -> float:
    """Closed-form teleported concurrence of a PSI-form target through equal channels."""
    if not 0.0 <= c_in <= 1.0:
        raise ValueError(f"c_in must lie in [0, 1], got {c_in!r}")
    ChannelSpec(family, r)  # range check
    if family is ChannelFamily.MEMS1:
        return r * c_in / (2.0 - r)
    if family is ChannelFamily.MEMS2:
        return 9.0 * r * r * c_in / 8.0
    raise ValueError("closed-form output concurrence exists for the mems families only")


def threshold_r(c_in: float) -> float:
    """Channel quality where a PHI-form target stops arriving entangled.

    Closed form for equal high-entanglement (mems1) channels; approaches 2/3
    as c_in goes to 1 and 1 as c_in goes to 0.
    """
    if not 0.0 < c_in <= 1.0:
        raise ValueError(f"threshold is defined for c_in in (0, 1], got {c_in!r}")
    s = np.sqrt(1.0 - c_in * c_in)
    return float((4.0 - 2.0 * c_in + 4.0 * s) / (3.0 + 5.0 * s))


def simulated_threshold_r(c_in: float, xtol: float = 1e-10) -> float:
    """Root of the simulated signed output concurrence over the mems1 range.

    Brackets on [2/3, 1] and bisects the signed concurrence of the rigid
    output for a PHI-form target; used to confirm :func:`threshold_r`.
    """

    def signed(r: float) -> float:
        res = teleport_rigid(
            TargetSpec(TargetForm.PHI, c_in),
            ChannelSpec(ChannelFamily.MEMS1, r),
            ChannelSpec(ChannelFamily.MEMS1, r),
        )
        return res.c_out_signed

    lo, hi = 2.0 / 3.0, 1.0
    f_lo = signed(lo)
    if f_lo >= 0.0:
        # Already entangled at the family edge; the crossing sits at the edge.
        return lo
    return float(brentq(signed, lo, hi, xtol=xtol))


def fidelity_label_for_family(family: ChannelFamily) -> str:
    """Which closed-form fidelity branch a channel family obeys.

    The F1 branch covers r in [0, 2/3] and matches mems2 channels; the F2
    branch covers r in [2/3, 1] and matches mems1 channels.  The match is
    exact only for maximally entangled inputs (see ``analytic_fidelity``).
    """
    if family is ChannelFamily.MEMS1:
        return "F2"
    if family is ChannelFamily.MEMS2:
        return "F1"
    raise ValueError("fidelity branches exist for the mems families only")


def analytic_fidelity(range_label: str, r: float, c_in: float) -> float:
    """Closed-form teleportation fidelity branches F1 and F2.

    F1(r) = (9 r^2 + 4)/16 * c_in^2 on r in [0, 2/3];
    F2(r) = r/(2 - r) * c_in^2 on r in [2/3, 1].

    Simulation reproduces these exactly at c_in = 1 (PSI-form targets) and
    deviates below it; the verify command quantifies that gap as a warning
    rather than treating the branches as ground truth.
    """
    if not 0.0 <= c_in <= 1.0:
        raise ValueError(f"c_in must lie in [0, 1], got {c_in!r}")
    if range_label == "F1":
        if not 0.0 - 1e-12 <= r <= 2.0 / 3.0 + 1e-12:
            raise ValueError(f"F1 covers r in [0, 2/3], got {r!r}")
        return (9.0 * r * r + 4.0) / 16.0 * c_in * c_in
    if range_label == "F2":
        if not 2.0 / 3.0 - 1e-12 <= r <= 1.0 + 1e-12:
            raise ValueError(f"F2 covers r in [2/3, 1], got {r!r}")
        return r / (2.0 - r) * c_in * c_in
    raise ValueError(f"unknown fidelity branch {range_label!r}; expected 'F1' or 'F2'")


def outcome_averaged_fidelity(target: TargetSpec, ch1: ChannelSpec, ch2: ChannelSpec) -> float:
    """Probability-weighted fidelity over all sixteen corrected outcomes."""
    total = 0.0
    for mu in range(1, 5):
        for nu in range(1, 5):
            res = teleport_general(target, ch1, ch2, (mu, nu))
            if res.fidelity is None:
                raise ValueError("outcome-averaged fidelity needs a pure target")
            total += res.probability * res.fidelity
    return total


def sweep(
    target_form: TargetForm,
    family1: ChannelFamily,
    family2: ChannelFamily,
    r_values,
    c_in_values,
    r2_values=None,
) -> list[dict]:
    """Grid evaluation of the rigid protocol.

    Equal-quality mode (default) reuses each r for both channels; passing
    ``r2_values`` switches to an independent (r1, r2) product grid, which is
    how mixed-family configurations are swept.  Rows come out in grid order
    with c_in innermost, so output files are deterministic.
    """
    rows: list[dict] = []
    if r2_values is None:
        for r in r_values:
            for c in c_in_values:
                res = teleport_rigid(
                    TargetSpec(target_form, float(c)),
                    ChannelSpec(family1, float(r)),
                    ChannelSpec(family2, float(r)),
                )
                rows.append(
                    {
                        "r": float(r),
                        "c_in": float(c),
                        "c_out": res.c_out,
                        "fidelity_rigid": float(res.fidelity),
                        "probability": res.probability,
                    }
                )
        return rows
    for r1 in r_values:
        for r2 in r2_values:
            for c in c_in_values:
                res = teleport_rigid(
                    TargetSpec(target_form, float(c)),
                    ChannelSpec(family1, float(r1)),
                    ChannelSpec(family2, float(r2)),
                )
                rows.append(
                    {
                        "r1": float(r1),
                        "r2": float(r2),
                        "c_in": float(c),
                        "c_out": res.c_out,
                        "fidelity_rigid": float(res.fidelity),
                        "probability": res.probability,
                    }
                )
    return rows
