"""End-to-end acceptance checks.

Each test covers one numbered criterion and prints a single
``criterion NN PASS``/``FAIL`` line (visible with ``pytest -s``).
"""

import io
from contextlib import redirect_stdout

import numpy as np

from memsteleport.cli import main
from memsteleport.measures import concurrence, linear_entropy, negativity
from memsteleport.states import (
    ChannelFamily,
    ChannelSpec,
    TargetForm,
    TargetSpec,
    alpha_from_concurrence,
    make_mems,
    random_density_sequence,
)
from memsteleport.teleport import (
    LOCC_FIDELITY_BOUND,
    closed_form_mems2_output,
    effective_channel_output,
    outcome_probabilities,
    simulated_threshold_r,
    teleport_general,
    teleport_rigid,
    threshold_r,
)
from memsteleport.verify import DEFAULT_SEED

MEMS1 = ChannelFamily.MEMS1
MEMS2 = ChannelFamily.MEMS2
_RANGES = {MEMS1: (2.0 / 3.0, 1.0), MEMS2: (0.0, 2.0 / 3.0)}


def _report(number: int, ok: bool, detail: str = "") -> None:
    print(f"criterion {number:02d} {'PASS' if ok else 'FAIL'}")
    assert ok, f"criterion {number:02d} failed {detail}".rstrip()


def _rigid(form: TargetForm, c_in: float, family: ChannelFamily, r: float):
    ch = ChannelSpec(family, r)
    return teleport_rigid(TargetSpec(form, c_in), ch, ch)


def test_criterion_01_mems_families_are_valid():
    worst = 0.0
    for family, (lo, hi) in _RANGES.items():
        for r in np.linspace(lo, hi, 100):
            state = make_mems(ChannelSpec(family, float(r)))  # constructor validates
            c, _ = concurrence(state)
            s = linear_entropy(state)
            s_expected = (
                8.0 * r * (1.0 - r) / 3.0
                if family is MEMS1
                else 8.0 / 9.0 - 2.0 * r * r / 3.0
            )
            worst = max(worst, abs(c - r), abs(s - s_expected))
    _report(1, worst <= 1e-12, f"max deviation {worst:.3e}")


def test_criterion_02_concurrence_law_mems1():
    worst = 0.0
    for r in np.linspace(2.0 / 3.0, 1.0, 25):
        for c_in in np.linspace(0.0, 1.0, 25):
            res = _rigid(TargetForm.PSI, float(c_in), MEMS1, float(r))
            worst = max(worst, abs(res.c_out - r * c_in / (2.0 - r)))
    _report(2, worst <= 1e-10, f"max deviation {worst:.3e}")


def test_criterion_03_concurrence_law_mems2():
    worst = 0.0
    for r in np.linspace(0.0, 2.0 / 3.0, 25):
        for c_in in np.linspace(0.0, 1.0, 25):
            res = _rigid(TargetForm.PSI, float(c_in), MEMS2, float(r))
            worst = max(worst, abs(res.c_out - 9.0 * r * r * c_in / 8.0))
    _report(3, worst <= 1e-10, f"max deviation {worst:.3e}")


def test_criterion_04_entanglement_threshold():
    worst = max(
        abs(simulated_threshold_r(c) - threshold_r(c)) for c in (0.2, 0.4, 0.6, 0.8, 1.0)
    )
    spot = abs(threshold_r(0.6) - 6.0 / 7.0)
    _report(4, worst <= 1e-6 and spot <= 1e-12, f"bisection {worst:.3e} spot {spot:.3e}")


def test_criterion_05_closed_form_mems2_outputs():
    worst = 0.0
    for form in (TargetForm.PHI, TargetForm.PSI):
        for c_in in (0.1, 0.3, 0.5, 0.8, 1.0):
            alpha = alpha_from_concurrence(c_in)
            for r in (0.25, 0.6):
                target = TargetSpec(form, c_in)
                tensor = _rigid(form, c_in, MEMS2, r).output_state.matrix
                closed = closed_form_mems2_output(form, alpha, r)
                effective = effective_channel_output(target, MEMS2, r).matrix
                worst = max(
                    worst,
                    float(np.abs(closed - tensor).max()),
                    float(np.abs(effective - tensor).max()),
                )
    _report(5, worst <= 1e-12, f"max entrywise deviation {worst:.3e}")


def test_criterion_06_mems2_ppt_and_npt_branches():
    worst_phi = 0.0
    npt_ok = True
    for r in np.linspace(0.0, 2.0 / 3.0, 25):
        for c_in in np.linspace(0.0, 1.0, 25):
            out_phi = _rigid(TargetForm.PHI, float(c_in), MEMS2, float(r)).output_state
            worst_phi = max(worst_phi, negativity(out_phi))
            if r > 0.01 and c_in > 0.01:
                out_psi = _rigid(TargetForm.PSI, float(c_in), MEMS2, float(r)).output_state
                npt_ok = npt_ok and negativity(out_psi) > 0.0
    _report(6, worst_phi <= 1e-10 and npt_ok, f"max PHI negativity {worst_phi:.3e}")


def test_criterion_07_fidelity_branches_and_warned_gap():
    worst = 0.0
    for r in np.linspace(2.0 / 3.0, 1.0, 25):
        res = _rigid(TargetForm.PSI, 1.0, MEMS1, float(r))
        worst = max(worst, abs(res.fidelity - r / (2.0 - r)))
    for r in np.linspace(0.0, 2.0 / 3.0, 25):
        res = _rigid(TargetForm.PSI, 1.0, MEMS2, float(r))
        worst = max(worst, abs(res.fidelity - (9.0 * r * r + 4.0) / 16.0))
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(["verify", "--samples", "200"])
    text = buf.getvalue()
    ok = (
        worst <= 1e-10
        and code == 0
        and "[WARN] fidelity_law_full_range" in text
        and "[FAIL]" not in text
    )
    _report(7, ok, f"max branch deviation {worst:.3e}, verify exit {code}")


def test_criterion_08_classical_bound_context(tmp_path):
    ideal = _rigid(TargetForm.PSI, 1.0, MEMS1, 1.0).fidelity
    junction = _rigid(TargetForm.PSI, 1.0, MEMS1, 2.0 / 3.0).fidelity
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--r-steps", "3", "--cin-steps", "2", "--out", str(out)])
    lines = out.read_text().splitlines()
    bound_col = lines[0].split(",").index("locc_bound")
    bounds = {line.split(",")[bound_col] for line in lines[1:]}
    ok = (
        abs(ideal - 1.0) <= 1e-12
        and ideal > LOCC_FIDELITY_BOUND
        and abs(junction - 0.5) <= 1e-12
        and code == 0
        and bounds == {f"{LOCC_FIDELITY_BOUND:.17g}"}
    )
    _report(8, ok, f"ideal {ideal}, junction {junction}, bound column {bounds}")


def test_criterion_09_outcome_completeness_and_corrections():
    rng = np.random.default_rng(DEFAULT_SEED)
    worst_sum = 0.0
    worst_fidelity = 1.0
    for _ in range(20):
        form = TargetForm.PHI if rng.uniform() < 0.5 else TargetForm.PSI
        c_in = float(rng.uniform())
        family = MEMS1 if rng.uniform() < 0.5 else MEMS2
        lo, hi = _RANGES[family]
        target = TargetSpec(form, c_in)
        ch = ChannelSpec(family, float(rng.uniform(lo, hi)))
        table = outcome_probabilities(target, ch, ch)
        worst_sum = max(worst_sum, abs(float(table.sum()) - 1.0))
        ideal = ChannelSpec(MEMS1, 1.0)
        for mu in range(1, 5):
            for nu in range(1, 5):
                res = teleport_general(target, ideal, ideal, (mu, nu))
                worst_fidelity = min(worst_fidelity, res.fidelity)
    ok = worst_sum <= 1e-12 and worst_fidelity >= 1.0 - 1e-12
    _report(9, ok, f"sum deviation {worst_sum:.3e}, min fidelity {worst_fidelity}")


def _interpolated_boundary() -> tuple[np.ndarray, np.ndarray]:
    r1 = np.linspace(2.0 / 3.0, 1.0, 20001)
    r2 = np.linspace(0.0, 2.0 / 3.0, 20001)
    s = np.concatenate([8.0 * r1 * (1.0 - r1) / 3.0, 8.0 / 9.0 - 2.0 * r2**2 / 3.0, [1.0]])
    c = np.concatenate([r1, r2, [0.0]])
    order = np.argsort(s)
    return s[order], c[order]


def test_criterion_10_random_state_map_properties():
    s_grid, c_grid = _interpolated_boundary()
    draws = random_density_sequence(DEFAULT_SEED, 2, 3000)
    boundary_ok = True
    for state in draws:
        _, signed = concurrence(state)
        limit = float(np.interp(linear_entropy(state), s_grid, c_grid))
        boundary_ok = boundary_ok and signed <= limit + 1e-9
    ch = ChannelSpec(MEMS1, 0.9)
    results = [
        teleport_rigid(TargetSpec(TargetForm.EXPLICIT, explicit_state=state), ch, ch)
        for state in draws
    ]
    gain = max(
        res.c_out - concurrence(state)[0] for res, state in zip(results, draws)
    )
    ok = boundary_ok and len(results) == 3000 and gain <= 1e-10
    _report(10, ok, f"max concurrence gain {gain:.3e}")


def test_criterion_11_deterministic_outputs(tmp_path):
    sweep_args = ["sweep", "--family1", "mems2", "--r-steps", "3", "--cin-steps", "3"]
    map_args = ["random-map", "--samples", "25", "--seed", "7"]
    ok = True
    for label, args in (("sweep", sweep_args), ("map", map_args)):
        first = tmp_path / f"{label}_a.csv"
        second = tmp_path / f"{label}_b.csv"
        ok = ok and main(args + ["--out", str(first)]) == 0
        ok = ok and main(args + ["--out", str(second)]) == 0
        ok = ok and first.read_bytes() == second.read_bytes()
        meta_a = (tmp_path / f"{label}_a.csv.meta.json").read_bytes()
        meta_b = (tmp_path / f"{label}_b.csv.meta.json").read_bytes()
        ok = ok and meta_a == meta_b
    _report(11, ok)
