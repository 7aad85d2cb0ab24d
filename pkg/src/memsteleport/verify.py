"""Standing cross-checks of the simulation against its closed-form laws.

Every check pits two independent computations against each other (tensor
simulation vs. analytic formula, direct vs. decomposed evaluation, random
sampling vs. boundary curves) and reports the worst deviation it saw.  The
``verify`` CLI subcommand runs the whole battery and fails loudly when any
FAIL-severity check exceeds its tolerance, so a tampered tolerance or a
broken numerical kernel cannot slip through quietly.

WARN-severity checks document known, expected gaps (the closed-form fidelity
branches hold exactly only for maximally entangled targets); they never
affect the exit status.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import partial
from typing import Callable, TextIO

import numpy as np

from . import tolerances
from .linalg import pauli
from .measures import concurrence, entanglement_report, linear_entropy
from .states import (
    ChannelFamily,
    ChannelSpec,
    TargetForm,
    TargetSpec,
    alpha_from_concurrence,
    boundary_concurrence,
    channel_state,
    family_curve,
    make_target,
    random_density_sequence,
)
from .teleport import (
    analytic_c_out,
    analytic_fidelity,
    closed_form_mems2_output,
    effective_channel_output,
    fidelity_label_for_family,
    outcome_probabilities,
    simulated_threshold_r,
    teleport_general,
    teleport_rigid,
    threshold_r,
)

DEFAULT_SEED = 20260825

SEVERITY_FAIL = "FAIL"
SEVERITY_WARN = "WARN"

_FAMILY_GRIDS = {
    ChannelFamily.MEMS1: (2.0 / 3.0, 1.0),
    ChannelFamily.MEMS2: (0.0, 2.0 / 3.0),
    ChannelFamily.WERNER: (0.0, 1.0),
}


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification check."""

    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    severity: str = SEVERITY_FAIL
    detail: str = ""


def _result(
    name: str,
    deviation: float,
    tolerance: float,
    severity: str = SEVERITY_FAIL,
    detail: str = "",
) -> CheckResult:
    return CheckResult(
        name, bool(deviation <= tolerance), float(deviation), float(tolerance), severity, detail
    )


def _grid(family: ChannelFamily, points: int) -> np.ndarray:
    lo, hi = _FAMILY_GRIDS[family]
    return np.linspace(lo, hi, points)


def _check_mems_parametric_curve() -> CheckResult:
    """Measured (concurrence, linear entropy) of every family matches its law."""
    dev = 0.0
    for family in ChannelFamily:
        for r in _grid(family, 101):
            state = channel_state(ChannelSpec(family, float(r)))
            c_expected, s_expected = family_curve(family, float(r))
            c, _ = concurrence(state)
            dev = max(dev, abs(c - c_expected), abs(linear_entropy(state) - s_expected))
    return _result(
        "mems_parametric_curve",
        dev,
        1e-12,
        detail="concurrence / linear-entropy laws across all three families",
    )


def _cout_law_deviation(family: ChannelFamily) -> float:
    dev = 0.0
    for r in _grid(family, 25):
        ch = ChannelSpec(family, float(r))
        for c in np.linspace(0.0, 1.0, 25):
            res = teleport_rigid(TargetSpec(TargetForm.PSI, float(c)), ch, ch)
            dev = max(dev, abs(res.c_out - analytic_c_out(family, float(r), float(c))))
    return dev


def _check_cout_law_mems1_psi() -> CheckResult:
    return _result(
        "cout_law_mems1_psi",
        _cout_law_deviation(ChannelFamily.MEMS1),
        1e-10,
        detail="simulated output concurrence vs. r c / (2 - r) on a 25x25 grid",
    )


def _check_cout_law_mems2_psi() -> CheckResult:
    return _result(
        "cout_law_mems2_psi",
        _cout_law_deviation(ChannelFamily.MEMS2),
        1e-10,
        detail="simulated output concurrence vs. 9 r^2 c / 8 on a 25x25 grid",
    )


def _check_dual_path_equivalence() -> CheckResult:
    """Six-qubit projection and 2x2-block decomposition give the same output."""
    dev = 0.0
    for form in (TargetForm.PHI, TargetForm.PSI):
        for family in (ChannelFamily.MEMS1, ChannelFamily.MEMS2):
            for r in _grid(family, 20):
                ch = ChannelSpec(family, float(r))
                for c in np.linspace(0.0, 1.0, 20):
                    target = TargetSpec(form, float(c))
                    direct = teleport_rigid(target, ch, ch).output_state.matrix
                    decomposed = effective_channel_output(target, family, float(r)).matrix
                    dev = max(dev, float(np.max(np.abs(direct - decomposed))))
    return _result(
        "dual_path_equivalence",
        dev,
        1e-12,
        detail="entrywise agreement of two independent evaluation paths",
    )


def _check_closed_form_outputs() -> CheckResult:
    """Simulated rigid outputs match the hand-derived mems2 matrices entrywise."""
    dev = 0.0
    for form in (TargetForm.PHI, TargetForm.PSI):
        for c in np.linspace(0.0, 1.0, 5):
            for r in np.linspace(0.0, 2.0 / 3.0, 4):
                ch = ChannelSpec(ChannelFamily.MEMS2, float(r))
                direct = teleport_rigid(TargetSpec(form, float(c)), ch, ch).output_state.matrix
                closed = closed_form_mems2_output(form, alpha_from_concurrence(float(c)), float(r))
                dev = max(dev, float(np.max(np.abs(direct - closed))))
    return _result("closed_form_outputs", dev, 1e-12)


def _check_threshold_law() -> CheckResult:
    """Bisected entanglement-survival threshold agrees with its closed form."""
    dev = 0.0
    for c in (0.2, 0.4, 0.6, 0.8, 1.0):
        dev = max(dev, abs(threshold_r(c) - simulated_threshold_r(c)))
    return _result("threshold_law", dev, 1e-6)


def _check_phi_mems2_separability() -> CheckResult:
    """Even-parity targets through fixed-population channel pairs arrive PPT."""
    worst = 0.0
    for c in np.linspace(0.0, 1.0, 15):
        for r in np.linspace(0.0, 2.0 / 3.0, 15):
            ch = ChannelSpec(ChannelFamily.MEMS2, float(r))
            res = teleport_rigid(TargetSpec(TargetForm.PHI, float(c)), ch, ch)
            worst = max(worst, entanglement_report(res.output_state).negativity)
    return _result(
        "phi_mems2_separability",
        worst,
        tolerances.current().psd,
        detail="largest negativity of any output on the grid",
    )


def _check_psi_mems2_entanglement() -> CheckResult:
    """Odd-parity targets through fixed-population pairs stay NPT for r, c > 0."""
    floor = np.inf
    for c in np.linspace(0.0, 1.0, 15)[1:]:
        for r in np.linspace(0.0, 2.0 / 3.0, 15)[1:]:
            ch = ChannelSpec(ChannelFamily.MEMS2, float(r))
            res = teleport_rigid(TargetSpec(TargetForm.PSI, float(c)), ch, ch)
            floor = min(floor, entanglement_report(res.output_state).negativity)
    return CheckResult(
        "psi_mems2_entanglement",
        bool(floor > 0.0),
        float(floor),
        0.0,
        SEVERITY_FAIL,
        "smallest negativity across the grid; must stay strictly positive",
    )


def _check_outcome_completeness() -> CheckResult:
    """The sixteen Bell outcome probabilities sum to one."""
    configs = (
        (
            TargetSpec(TargetForm.PHI, 0.7),
            ChannelSpec(ChannelFamily.MEMS1, 0.8),
            ChannelSpec(ChannelFamily.MEMS1, 0.95),
        ),
        (
            TargetSpec(TargetForm.PSI, 0.4),
            ChannelSpec(ChannelFamily.MEMS2, 0.5),
            ChannelSpec(ChannelFamily.MEMS2, 0.2),
        ),
        (
            TargetSpec(TargetForm.PSI, 1.0),
            ChannelSpec(ChannelFamily.MEMS1, 1.0),
            ChannelSpec(ChannelFamily.MEMS2, 0.6),
        ),
        (
            TargetSpec(TargetForm.PHI, 0.0),
            ChannelSpec(ChannelFamily.WERNER, 0.3),
            ChannelSpec(ChannelFamily.MEMS1, 0.7),
        ),
    )
    dev = 0.0
    for target, ch1, ch2 in configs:
        dev = max(dev, abs(float(outcome_probabilities(target, ch1, ch2).sum()) - 1.0))
    return _result("outcome_completeness", dev, 1e-12)


def _check_ideal_channel_corrections() -> CheckResult:
    """With perfect channels every corrected outcome returns the exact target.

    Also confirms by brute force that the tabulated correction is the best of
    all sixteen Pauli pairs, so the by-product table is pinned by behaviour
    rather than by convention.
    """
    ideal = ChannelSpec(ChannelFamily.MEMS1, 1.0)
    dev = 0.0
    for form, c in ((TargetForm.PHI, 0.7), (TargetForm.PSI, 0.3), (TargetForm.PHI, 1.0)):
        target = TargetSpec(form, c)
        pure = make_target(target).matrix
        for mu in range(1, 5):
            for nu in range(1, 5):
                res = teleport_general(target, ideal, ideal, (mu, nu))
                raw = teleport_general(
                    target, ideal, ideal, (mu, nu), apply_correction=False
                ).output_state.matrix
                best = 0.0
                for i in range(1, 5):
                    for j in range(1, 5):
                        u = np.kron(pauli(i), pauli(j))
                        best = max(best, float(np.trace(pure @ u @ raw @ u.conj().T).real))
                dev = max(dev, 1.0 - res.fidelity, best - res.fidelity)
    return _result(
        "ideal_channel_corrections",
        dev,
        1e-12,
        detail="corrected fidelity reaches 1 and beats every other Pauli pair",
    )


def _check_no_entanglement_gain() -> CheckResult:
    """No channel configuration increases concurrence."""
    dev = -np.inf
    for form in (TargetForm.PHI, TargetForm.PSI):
        for family in ChannelFamily:
            for r in _grid(family, 10):
                ch = ChannelSpec(family, float(r))
                for c in np.linspace(0.0, 1.0, 10):
                    res = teleport_rigid(TargetSpec(form, float(c)), ch, ch)
                    dev = max(dev, res.c_out - float(c))
    return _result(
        "no_entanglement_gain",
        max(dev, 0.0),
        1e-10,
        detail="largest c_out - c_in over both target forms and all families",
    )


def _check_monotonic_in_quality() -> CheckResult:
    """Output concurrence never drops when a channel's quality parameter rises."""
    worst_drop = 0.0
    curves: list[list[float]] = []
    for form in (TargetForm.PHI, TargetForm.PSI):
        for family in (ChannelFamily.MEMS1, ChannelFamily.MEMS2):
            curve = []
            for r in _grid(family, 30):
                ch = ChannelSpec(family, float(r))
                curve.append(teleport_rigid(TargetSpec(form, 0.8), ch, ch).c_out)
            curves.append(curve)
    mixed = []
    fixed = ChannelSpec(ChannelFamily.MEMS2, 0.5)
    for r in _grid(ChannelFamily.MEMS1, 30):
        res = teleport_rigid(TargetSpec(TargetForm.PSI, 0.8), ChannelSpec(ChannelFamily.MEMS1, float(r)), fixed)
        mixed.append(res.c_out)
    curves.append(mixed)
    for curve in curves:
        for lower, upper in zip(curve, curve[1:]):
            worst_drop = max(worst_drop, lower - upper)
    return _result(
        "monotonic_in_quality",
        max(worst_drop, 0.0),
        1e-12,
        detail="includes a mixed-family configuration with one channel held fixed",
    )


def _fidelity_branch_deviation(c_values, forms=(TargetForm.PSI,)) -> float:
    dev = 0.0
    for family in (ChannelFamily.MEMS1, ChannelFamily.MEMS2):
        label = fidelity_label_for_family(family)
        for r in _grid(family, 25):
            ch = ChannelSpec(family, float(r))
            for c in c_values:
                for form in forms:
                    res = teleport_rigid(TargetSpec(form, float(c)), ch, ch)
                    dev = max(dev, abs(res.fidelity - analytic_fidelity(label, float(r), float(c))))
    return dev


def _check_fidelity_law_max_entanglement() -> CheckResult:
    return _result(
        "fidelity_law_max_entanglement",
        _fidelity_branch_deviation([1.0]),
        1e-10,
        detail="closed-form branches F1/F2 at c_in = 1 (psi-form target)",
    )


def _check_fidelity_law_full_range() -> CheckResult:
    return _result(
        "fidelity_law_full_range",
        _fidelity_branch_deviation(
            np.linspace(0.1, 1.0, 10), forms=(TargetForm.PSI, TargetForm.PHI)
        ),
        1e-10,
        severity=SEVERITY_WARN,
        detail="branches bind only for the psi-form target at c_in = 1; the reported gap elsewhere is expected",
    )


def _check_random_boundary_dominance(seed: int, samples: int) -> CheckResult:
    """Random mixed states never beat the boundary families' concurrence."""
    dev = -np.inf
    for state in random_density_sequence(seed, 2, samples):
        c, _ = concurrence(state)
        dev = max(dev, c - boundary_concurrence(linear_entropy(state)))
    return _result(
        "random_boundary_dominance",
        max(dev, 0.0),
        1e-9,
        detail=f"{samples} seeded draws stay below the concurrence-vs-mixedness boundary",
    )


def _check_random_map_no_gain(seed: int, samples: int = 300) -> CheckResult:
    """Random explicit targets lose concurrence through equal r = 0.9 channels."""
    ch = ChannelSpec(ChannelFamily.MEMS1, 0.9)
    dev = -np.inf
    for state in random_density_sequence(seed, 2, samples):
        c_in, _ = concurrence(state)
        res = teleport_rigid(TargetSpec(TargetForm.EXPLICIT, explicit_state=state), ch, ch)
        dev = max(dev, res.c_out - c_in)
    return _result(
        "random_map_no_gain",
        max(dev, 0.0),
        1e-10,
        detail=f"{samples} seeded random targets through equal high-entanglement channels",
    )


def _run(check: Callable[[], CheckResult]) -> CheckResult:
    name = getattr(check, "func", check).__name__.removeprefix("_check_")
    try:
        return check()
    except Exception as exc:  # a crashed check is a failed check, not a crash of verify
        return CheckResult(
            name,
            False,
            float("nan"),
            float("nan"),
            SEVERITY_FAIL,
            f"raised {type(exc).__name__}: {exc}",
        )


def run_all(seed: int = DEFAULT_SEED, samples: int = 3000) -> list[CheckResult]:
    """Run the full battery; deterministic for a given seed and sample count."""
    checks: list[Callable[[], CheckResult]] = [
        _check_mems_parametric_curve,
        _check_cout_law_mems1_psi,
        _check_cout_law_mems2_psi,
        _check_dual_path_equivalence,
        _check_closed_form_outputs,
        _check_threshold_law,
        _check_phi_mems2_separability,
        _check_psi_mems2_entanglement,
        _check_outcome_completeness,
        _check_ideal_channel_corrections,
        _check_no_entanglement_gain,
        _check_monotonic_in_quality,
        _check_fidelity_law_max_entanglement,
        _check_fidelity_law_full_range,
        partial(_check_random_boundary_dominance, seed, samples),
        partial(_check_random_map_no_gain, seed),
    ]
    return [_run(check) for check in checks]


def report(results: list[CheckResult], stream: TextIO | None = None) -> bool:
    """Print one line per check; True when nothing of FAIL severity failed."""
    if stream is None:
        stream = sys.stdout
    failed = warned = 0
    for res in results:
        status = "PASS" if res.passed else res.severity
        line = (
            f"[{status}] {res.name}: max deviation {res.max_deviation:.3e}"
            f" (tolerance {res.tolerance:.1e})"
        )
        if res.detail:
            line += f" -- {res.detail}"
        print(line, file=stream)
        if not res.passed:
            if res.severity == SEVERITY_FAIL:
                failed += 1
            else:
                warned += 1
    print(
        f"{len(results) - failed - warned} passed, {warned} warned, {failed} failed",
        file=stream,
    )
    return failed == 0
