import json

import pytest

from memsteleport.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_VERIFY, main
from memsteleport.states import ChannelFamily, ChannelSpec, TargetForm, TargetSpec
from memsteleport.teleport import teleport_rigid


def _read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    return header, rows


def test_sweep_csv_contents(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(
        [
            "sweep",
            "--target",
            "psi",
            "--family1",
            "mems1",
            "--r-min",
            "1",
            "--r-max",
            "1",
            "--r-steps",
            "1",
            "--cin-min",
            "1",
            "--cin-max",
            "1",
            "--cin-steps",
            "1",
            "--out",
            str(out),
        ]
    )
    assert code == EXIT_OK
    header, rows = _read_csv(out)
    assert header == ["r", "c_in", "c_out", "fidelity_rigid", "probability", "locc_bound"]
    assert len(rows) == 1
    row = {k: float(v) for k, v in rows[0].items()}
    # ideal channel, maximally entangled target: everything teleports intact
    assert row["r"] == 1.0
    assert row["c_in"] == 1.0
    assert abs(row["c_out"] - 1.0) < 1e-10
    assert abs(row["fidelity_rigid"] - 1.0) < 1e-10
    assert abs(row["probability"] - 1.0 / 16.0) < 1e-12
    assert abs(row["locc_bound"] - 2.0 / 3.0) < 1e-15


def test_sweep_matches_library(tmp_path):
    out = tmp_path / "sweep.csv"
    main(
        [
            "sweep",
            "--family1",
            "mems1",
            "--r-steps",
            "3",
            "--cin-steps",
            "2",
            "--out",
            str(out),
        ]
    )
    _, rows = _read_csv(out)
    assert len(rows) == 6
    last = {k: float(v) for k, v in rows[-1].items()}
    res = teleport_rigid(
        TargetSpec(TargetForm.PSI, 1.0),
        ChannelSpec(ChannelFamily.MEMS1, 1.0),
        ChannelSpec(ChannelFamily.MEMS1, 1.0),
    )
    # 17-significant-digit output round-trips the double exactly
    assert last["c_out"] == res.c_out
    assert last["probability"] == res.probability


def test_sweep_outcome_averaged_column(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(
        [
            "sweep",
            "--r-min",
            "1",
            "--r-max",
            "1",
            "--r-steps",
            "1",
            "--cin-min",
            "0.7",
            "--cin-max",
            "0.7",
            "--cin-steps",
            "1",
            "--outcome-averaged",
            "--out",
            str(out),
        ]
    )
    assert code == EXIT_OK
    header, rows = _read_csv(out)
    assert header[-1] == "fidelity_outcome_avg"
    assert abs(float(rows[0]["fidelity_outcome_avg"]) - 1.0) < 1e-10


def test_sweep_mixed_family_grid(tmp_path):
    out = tmp_path / "mixed.csv"
    code = main(
        [
            "sweep",
            "--family1",
            "mems1",
            "--family2",
            "mems2",
            "--r-steps",
            "2",
            "--r2-steps",
            "3",
            "--cin-steps",
            "2",
            "--out",
            str(out),
        ]
    )
    assert code == EXIT_OK
    header, rows = _read_csv(out)
    assert header[:2] == ["r1", "r2"]
    assert len(rows) == 12


def test_rerun_is_byte_identical(tmp_path):
    args = ["sweep", "--r-steps", "4", "--cin-steps", "3"]
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    assert main(args + ["--out", str(first)]) == EXIT_OK
    assert main(args + ["--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert (
        (tmp_path / "a.csv.meta.json").read_bytes()
        == (tmp_path / "b.csv.meta.json").read_bytes()
    )


def test_meta_sidecar_contents(tmp_path):
    out = tmp_path / "thr.csv"
    assert main(["threshold", "--cin-steps", "2", "--out", str(out)]) == EXIT_OK
    meta = json.loads((tmp_path / "thr.csv.meta.json").read_text())
    assert meta["command"] == "threshold"
    assert meta["columns"] == [
        "c_in",
        "r_threshold_analytic",
        "r_threshold_simulated",
        "deviation",
    ]
    assert meta["config"]["cin_steps"] == 2
    assert set(meta["tolerances"]) == {"herm", "imag", "psd", "prob"}


def test_json_format(capsys):
    assert main(["mems-curve", "--families", "mems1", "--steps", "3", "--format", "json"]) == EXIT_OK
    records = json.loads(capsys.readouterr().out)
    assert len(records) == 3
    assert records[0]["family"] == "mems1"
    assert abs(records[-1]["concurrence"] - 1.0) < 1e-10


def test_gnuplot_header(capsys):
    assert main(["threshold", "--cin-steps", "2", "--gnuplot-header"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# c_in,")
    assert main(["threshold", "--cin-steps", "2", "--format", "json", "--gnuplot-header"]) == EXIT_CONFIG


def test_threshold_values(capsys):
    assert main(["threshold", "--cin-min", "0.6", "--cin-max", "0.6", "--cin-steps", "1"]) == EXIT_OK
    line = capsys.readouterr().out.splitlines()[1].split(",")
    assert abs(float(line[1]) - 6.0 / 7.0) < 1e-12
    assert abs(float(line[3])) < 1e-6


def test_fidelity_command(capsys):
    assert main(["fidelity", "--family", "mems2", "--r-steps", "3"]) == EXIT_OK
    header, *rows = capsys.readouterr().out.splitlines()
    assert header.split(",")[:4] == ["r", "c_in", "fidelity_rigid", "fidelity_closed_form"]
    for line in rows:
        fields = [float(x) for x in line.split(",")]
        assert abs(fields[4]) < 1e-10  # deviation column stays at machine precision at c_in = 1


def test_random_map_output(tmp_path):
    out = tmp_path / "map.csv"
    assert main(["random-map", "--samples", "20", "--out", str(out)]) == EXIT_OK
    header, rows = _read_csv(out)
    assert header == [
        "sample",
        "c_in_signed",
        "s_in",
        "c_out_signed_mems1",
        "purity_out_mems1",
        "c_out_signed_mems2",
        "purity_out_mems2",
    ]
    assert len(rows) == 20
    assert [int(r["sample"]) for r in rows] == list(range(20))
    for r in rows:
        # ideal mems1 channels (r1 = 1) keep the input concurrence exactly
        assert abs(float(r["c_out_signed_mems1"]) - float(r["c_in_signed"])) < 1e-10
    rerun = tmp_path / "map2.csv"
    assert main(["random-map", "--samples", "20", "--out", str(rerun)]) == EXIT_OK
    assert out.read_bytes() == rerun.read_bytes()


def test_random_map_seed_changes_output(capsys):
    assert main(["random-map", "--samples", "2", "--seed", "1"]) == EXIT_OK
    first = capsys.readouterr().out
    assert main(["random-map", "--samples", "2", "--seed", "2"]) == EXIT_OK
    assert first != capsys.readouterr().out


def test_config_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--family1", "nonsense"])
    assert exc.value.code == EXIT_CONFIG
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == EXIT_CONFIG
    # in-range parse, out-of-range value: reported as config error, not traceback
    assert main(["sweep", "--family1", "mems2", "--r-min", "0.9", "--r-max", "0.95"]) == EXIT_CONFIG
    capsys.readouterr()


def test_io_error_exit_3(tmp_path):
    missing = tmp_path / "no" / "such" / "dir" / "x.csv"
    assert main(["threshold", "--out", str(missing)]) == EXIT_IO


def test_verify_ok_and_tampered(monkeypatch, capsys):
    assert main(["verify", "--samples", "40"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "[WARN] fidelity_law_full_range" in out
    assert "[FAIL]" not in out
    monkeypatch.setenv("MEMSTELEPORT_TAU_HERM", "1e-20")
    assert main(["verify", "--samples", "40"]) == EXIT_VERIFY
    assert "[FAIL]" in capsys.readouterr().out
