"""Command-line front end.

Subcommands
-----------
sweep        rigid-protocol grid over channel quality and input concurrence
random-map   push seeded random targets through both boundary families
fidelity     simulated vs. closed-form teleportation fidelity on one family
threshold    analytic vs. bisected entanglement-survival threshold
verify       run the full battery of numerical self-checks
mems-curve   tabulate measured (concurrence, linear entropy) family curves

Data commands print CSV (default) or JSON to stdout, or to ``--out PATH``
plus a ``PATH.meta.json`` sidecar describing the run.  Output is
deterministic: rerunning a command with the same arguments reproduces the
bytes exactly, so files are safe to diff.

Exit codes: 0 success, 1 configuration error, 2 verification failure,
3 output I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Sequence

import numpy as np

from . import tolerances
from .measures import concurrence, linear_entropy, purity
from .states import (
    FAMILY_RANGES,
    ChannelFamily,
    ChannelSpec,
    TargetForm,
    TargetSpec,
    channel_state,
    random_density_sequence,
)
from .teleport import (
    LOCC_FIDELITY_BOUND,
    analytic_fidelity,
    fidelity_label_for_family,
    outcome_averaged_fidelity,
    simulated_threshold_r,
    sweep,
    teleport_rigid,
    threshold_r,
)
from .verify import DEFAULT_SEED, report, run_all

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with the configuration code."""

    def error(self, message: str) -> None:  # noqa: D401 - argparse hook
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError("expected a positive integer")
    return value


def _format_value(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return f"{float(value):.17g}"


def _render(columns: list[str], rows: list[dict], fmt: str, gnuplot_header: bool) -> str:
    if fmt == "json":
        if gnuplot_header:
            raise ValueError("--gnuplot-header applies to csv output only")
        return json.dumps(rows, indent=2) + "\n"
    header = ",".join(columns)
    if gnuplot_header:
        header = "# " + header
    lines = [header]
    for row in rows:
        lines.append(",".join(_format_value(row[name]) for name in columns))
    return "\n".join(lines) + "\n"


def _emit(args: argparse.Namespace, command: str, columns: list[str], rows: list[dict]) -> None:
    text = _render(columns, rows, args.format, args.gnuplot_header)
    if args.out is None:
        sys.stdout.write(text)
        return
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(text)
    config = {
        key: value
        for key, value in vars(args).items()
        if key not in ("handler", "command", "out")
    }
    meta = {
        "command": command,
        "package_version": _package_version(),
        "columns": columns,
        "config": config,
        "tolerances": dataclasses.asdict(tolerances.current()),
    }
    with open(args.out + ".meta.json", "w", encoding="utf-8") as handle:
        handle.write(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _package_version() -> str:
    from . import __version__

    return __version__


def _resolve_grid(family: ChannelFamily, lo, hi, steps: int) -> np.ndarray:
    default_lo, default_hi = FAMILY_RANGES[family]
    lo = default_lo if lo is None else float(lo)
    hi = default_hi if hi is None else float(hi)
    if hi < lo:
        raise ValueError(f"empty grid: upper bound {hi!r} below lower bound {lo!r}")
    return np.linspace(lo, hi, steps)


def _cmd_sweep(args: argparse.Namespace) -> int:
    target_form = TargetForm(args.target)
    family1 = ChannelFamily(args.family1)
    family2 = ChannelFamily(args.family2 if args.family2 is not None else args.family1)
    r_values = _resolve_grid(family1, args.r_min, args.r_max, args.r_steps)
    c_values = np.linspace(args.cin_min, args.cin_max, args.cin_steps)
    r2_values = None
    if args.r2_min is not None or args.r2_max is not None or args.r2_steps is not None:
        steps = args.r2_steps if args.r2_steps is not None else args.r_steps
        r2_values = _resolve_grid(family2, args.r2_min, args.r2_max, steps)
    rows = sweep(target_form, family1, family2, r_values, c_values, r2_values)
    columns = (["r"] if r2_values is None else ["r1", "r2"]) + [
        "c_in",
        "c_out",
        "fidelity_rigid",
        "probability",
        "locc_bound",
    ]
    for row in rows:
        row["locc_bound"] = LOCC_FIDELITY_BOUND
    if args.outcome_averaged:
        columns.append("fidelity_outcome_avg")
        for row in rows:
            r1 = row["r"] if r2_values is None else row["r1"]
            r2 = row["r"] if r2_values is None else row["r2"]
            row["fidelity_outcome_avg"] = outcome_averaged_fidelity(
                TargetSpec(target_form, row["c_in"]),
                ChannelSpec(family1, r1),
                ChannelSpec(family2, r2),
            )
    _emit(args, "sweep", columns, rows)
    return EXIT_OK


def _cmd_random_map(args: argparse.Namespace) -> int:
    ch1 = ChannelSpec(ChannelFamily.MEMS1, args.r1)
    ch2 = ChannelSpec(ChannelFamily.MEMS2, args.r2)
    rows = []
    for index, state in enumerate(random_density_sequence(args.seed, 2, args.samples)):
        _, signed_in = concurrence(state)
        target = TargetSpec(TargetForm.EXPLICIT, explicit_state=state)
        out1 = teleport_rigid(target, ch1, ch1)
        out2 = teleport_rigid(target, ch2, ch2)
        rows.append(
            {
                "sample": index,
                "c_in_signed": signed_in,
                "s_in": linear_entropy(state),
                "c_out_signed_mems1": out1.c_out_signed,
                "purity_out_mems1": purity(out1.output_state),
                "c_out_signed_mems2": out2.c_out_signed,
                "purity_out_mems2": purity(out2.output_state),
            }
        )
    columns = [
        "sample",
        "c_in_signed",
        "s_in",
        "c_out_signed_mems1",
        "purity_out_mems1",
        "c_out_signed_mems2",
        "purity_out_mems2",
    ]
    _emit(args, "random-map", columns, rows)
    return EXIT_OK


def _cmd_fidelity(args: argparse.Namespace) -> int:
    family = ChannelFamily(args.family)
    label = fidelity_label_for_family(family)
    r_values = _resolve_grid(family, args.r_min, args.r_max, args.r_steps)
    rows = []
    for r in r_values:
        ch = ChannelSpec(family, float(r))
        res = teleport_rigid(TargetSpec(TargetForm(args.target), args.cin), ch, ch)
        closed = analytic_fidelity(label, float(r), args.cin)
        rows.append(
            {
                "r": float(r),
                "c_in": float(args.cin),
                "fidelity_rigid": float(res.fidelity),
                "fidelity_closed_form": closed,
                "fidelity_deviation": float(res.fidelity) - closed,
                "locc_bound": LOCC_FIDELITY_BOUND,
            }
        )
    columns = [
        "r",
        "c_in",
        "fidelity_rigid",
        "fidelity_closed_form",
        "fidelity_deviation",
        "locc_bound",
    ]
    _emit(args, "fidelity", columns, rows)
    return EXIT_OK


def _cmd_threshold(args: argparse.Namespace) -> int:
    rows = []
    for c in np.linspace(args.cin_min, args.cin_max, args.cin_steps):
        analytic = threshold_r(float(c))
        simulated = simulated_threshold_r(float(c))
        rows.append(
            {
                "c_in": float(c),
                "r_threshold_analytic": analytic,
                "r_threshold_simulated": simulated,
                "deviation": simulated - analytic,
            }
        )
    columns = ["c_in", "r_threshold_analytic", "r_threshold_simulated", "deviation"]
    _emit(args, "threshold", columns, rows)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    ok = report(run_all(args.seed, args.samples))
    return EXIT_OK if ok else EXIT_VERIFY


def _cmd_mems_curve(args: argparse.Namespace) -> int:
    rows = []
    for name in args.families:
        family = ChannelFamily(name)
        for r in _resolve_grid(family, None, None, args.steps):
            state = channel_state(ChannelSpec(family, float(r)))
            c, _ = concurrence(state)
            rows.append(
                {
                    "family": family.value,
                    "r": float(r),
                    "concurrence": c,
                    "linear_entropy": linear_entropy(state),
                }
            )
    columns = ["family", "r", "concurrence", "linear_entropy"]
    _emit(args, "mems-curve", columns, rows)
    return EXIT_OK


def _add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="write here instead of stdout (adds a .meta.json sidecar)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (default csv)")
    parser.add_argument(
        "--gnuplot-header",
        action="store_true",
        help="comment the CSV header line with '# ' so gnuplot reads the file directly",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="memsteleport", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("sweep", help="grid-evaluate the rigid protocol")
    p.add_argument("--target", choices=("phi", "psi"), default="psi", help="pure target form (default psi)")
    p.add_argument("--family1", choices=("mems1", "mems2", "werner"), default="mems1")
    p.add_argument("--family2", choices=("mems1", "mems2", "werner"), default=None, help="default: same as --family1")
    p.add_argument("--r-min", type=float, default=None, help="default: family lower edge")
    p.add_argument("--r-max", type=float, default=None, help="default: family upper edge")
    p.add_argument("--r-steps", type=_positive_int, default=25)
    p.add_argument("--r2-min", type=float, default=None, help="any --r2-* switches to an independent (r1, r2) grid")
    p.add_argument("--r2-max", type=float, default=None)
    p.add_argument("--r2-steps", type=_positive_int, default=None)
    p.add_argument("--cin-min", type=float, default=0.0)
    p.add_argument("--cin-max", type=float, default=1.0)
    p.add_argument("--cin-steps", type=_positive_int, default=25)
    p.add_argument(
        "--outcome-averaged",
        action="store_true",
        help="add the probability-weighted fidelity over all sixteen corrected outcomes",
    )
    _add_output_arguments(p)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("random-map", help="teleport seeded random targets through both families")
    p.add_argument("--samples", type=_positive_int, default=3000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--r1", type=float, default=1.0, help="quality of the high-entanglement (mems1) pair")
    p.add_argument("--r2", type=float, default=2.0 / 3.0, help="quality of the fixed-population (mems2) pair")
    _add_output_arguments(p)
    p.set_defaults(handler=_cmd_random_map)

    p = sub.add_parser("fidelity", help="simulated vs. closed-form fidelity on one family")
    p.add_argument("--family", choices=("mems1", "mems2"), default="mems1")
    p.add_argument("--target", choices=("phi", "psi"), default="psi")
    p.add_argument("--cin", type=float, default=1.0)
    p.add_argument("--r-min", type=float, default=None)
    p.add_argument("--r-max", type=float, default=None)
    p.add_argument("--r-steps", type=_positive_int, default=25)
    _add_output_arguments(p)
    p.set_defaults(handler=_cmd_fidelity)

    p = sub.add_parser("threshold", help="entanglement-survival threshold, analytic and bisected")
    p.add_argument("--cin-min", type=float, default=0.2)
    p.add_argument("--cin-max", type=float, default=1.0)
    p.add_argument("--cin-steps", type=_positive_int, default=5)
    _add_output_arguments(p)
    p.set_defaults(handler=_cmd_threshold)

    p = sub.add_parser("verify", help="run all numerical self-checks")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=_positive_int, default=3000, help="random draws for the sampling checks")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("mems-curve", help="measured family curves in the concurrence/mixedness plane")
    p.add_argument(
        "--families",
        nargs="+",
        choices=("mems1", "mems2", "werner"),
        default=["mems1", "mems2", "werner"],
    )
    p.add_argument("--steps", type=_positive_int, default=100)
    _add_output_arguments(p)
    p.set_defaults(handler=_cmd_mems_curve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
