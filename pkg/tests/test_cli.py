import json
import math

import pytest

from weakctrl.cli import main

REFERENCE_F_H = 0.9344315941261296


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def payload_lines(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def parse_csv(text):
    lines = payload_lines(text)
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    return header, rows


def test_protocol_helstrom_reference(capsys):
    code, out = run_cli(["protocol", "--theta", "0.715", "--p", "0.145",
                         "--scheme", "helstrom"], capsys)
    assert code == 0
    header, rows = parse_csv(out)
    assert float(rows[0]["f_avg"]) == pytest.approx(REFERENCE_F_H, abs=1e-12)
    assert float(rows[0]["cos_chi"]) == 1.0


def test_protocol_noiseless_do_nothing(capsys):
    code, out = run_cli(["protocol", "--theta", "0.715", "--p", "0", "--scheme", "dn"], capsys)
    assert code == 0
    _, rows = parse_csv(out)
    assert float(rows[0]["f_avg"]) == pytest.approx(1.0, abs=1e-12)


def test_protocol_optimal_reference(capsys):
    code, out = run_cli(["protocol"], capsys)  # defaults mirror the operating point
    assert code == 0
    _, rows = parse_csv(out)
    assert float(rows[0]["f_avg"]) == pytest.approx(0.955369516382645, abs=1e-10)
    assert float(rows[0]["cos_chi"]) == pytest.approx(0.9036469024879378, abs=1e-10)


def test_protocol_column_schema_is_pinned(capsys):
    _, out = run_cli(["protocol"], capsys)
    header, _ = parse_csv(out)
    assert header == [
        "scheme", "theta", "p", "chi", "cos_chi", "eta",
        "f_plus", "f_minus", "f_avg",
        "p_out_plus_in_plus", "p_out_minus_in_plus",
        "p_out_plus_in_minus", "p_out_minus_in_minus",
        "bloch_plus_x", "bloch_plus_y", "bloch_plus_z",
        "bloch_minus_x", "bloch_minus_y", "bloch_minus_z",
        "mc_f_avg", "mc_stderr", "mc_f_plus", "mc_f_minus", "mc_shots",
    ]
    assert any(line.startswith("# schema_version=") for line in out.splitlines())


def test_protocol_degrees_flag(capsys):
    _, radians = run_cli(["protocol", "--theta", "0.715", "--scheme", "helstrom"], capsys)
    _, degrees = run_cli(["protocol", "--theta", str(math.degrees(0.715)),
                          "--scheme", "helstrom", "--degrees"], capsys)
    _, rows_rad = parse_csv(radians)
    _, rows_deg = parse_csv(degrees)
    assert float(rows_deg[0]["theta"]) == pytest.approx(0.715, abs=1e-12)
    assert float(rows_deg[0]["f_avg"]) == pytest.approx(float(rows_rad[0]["f_avg"]), abs=1e-12)


def test_protocol_shots_requires_seed(capsys):
    code, _ = run_cli(["protocol", "--shots", "100"], capsys)
    assert code == 2


def test_protocol_mc_deterministic(capsys):
    args = ["protocol", "--shots", "20000", "--seed", "5"]
    _, first = run_cli(args, capsys)
    _, second = run_cli(args, capsys)
    assert payload_lines(first) == payload_lines(second)
    _, rows = parse_csv(first)
    mc, exact = float(rows[0]["mc_f_avg"]), float(rows[0]["f_avg"])
    assert abs(mc - exact) < 4 * float(rows[0]["mc_stderr"])


def test_protocol_rejects_invalid_p(capsys):
    code, _ = run_cli(["protocol", "--p", "0.7"], capsys)
    assert code == 2


def test_protocol_custom_chi_eta_pair(capsys):
    code, _ = run_cli(["protocol", "--chi", "0.4"], capsys)
    assert code == 2  # eta missing
    code, out = run_cli(["protocol", "--chi", "0.4", "--eta", "0.2"], capsys)
    assert code == 0
    _, rows = parse_csv(out)
    assert rows[0]["scheme"] == "custom"


def test_sweep_summary_and_schema(tmp_path, capsys):
    out_file = tmp_path / "sweep.csv"
    code, _ = run_cli(["sweep", "--n-theta", "60", "--n-p", "60",
                       "--out", str(out_file)], capsys)
    assert code == 0
    text = out_file.read_text()
    header, rows = parse_csv(text)
    assert header == ["theta", "p", "chi_opt", "cos_chi_opt", "eta_opt",
                      "f_opt", "f_dn", "f_h", "f_diff", "degenerate"]
    assert len(rows) == 3600
    summary = {line.split("=")[0]: line.split("=")[1]
               for line in text.splitlines() if line.startswith("# summary.")}
    assert float(summary["# summary.argmax_theta"]) == pytest.approx(0.715, abs=0.01)
    assert float(summary["# summary.argmax_p"]) == pytest.approx(0.115, abs=0.01)
    crossover_lines = [l for l in text.splitlines() if l.startswith("# crossover ")]
    assert len(crossover_lines) == 60


def test_sweep_rejects_bad_grid(tmp_path, capsys):
    out_file = tmp_path / "nope.csv"
    code, _ = run_cli(["sweep", "--p-max", "0.7", "--out", str(out_file)], capsys)
    assert code == 2
    assert not out_file.exists()  # no partial output


def test_experiment_model_defaults(capsys):
    code, out = run_cli(["experiment-model"], capsys)
    assert code == 0
    header, rows = parse_csv(out)
    assert [float(r["cos_chi"]) for r in rows] == [0.0, 0.93, 1.0]
    mid = rows[1]
    assert float(mid["f_model"]) > REFERENCE_F_H
    assert float(mid["f_model"]) < float(mid["f_ideal"])


def test_experiment_model_ideal_reflectivities_match_ideal_column(capsys):
    code, out = run_cli(["experiment-model", "--rh", str(1.0 / 3.0), "--rv", "1.0",
                         "--n-points", "9"], capsys)
    assert code == 0
    _, rows = parse_csv(out)
    for row in rows:
        assert float(row["f_model"]) == pytest.approx(float(row["f_ideal"]), abs=1e-10)


def test_experiment_model_rejects_bad_cos_chi(capsys):
    code, _ = run_cli(["experiment-model", "--cos-chi", "0,1.5"], capsys)
    assert code == 2


def test_tomography_deterministic_and_summarised(tmp_path, capsys):
    args = ["tomography", "--seed", "3", "--rate", "100", "--duration", "360"]
    _, first = run_cli(args, capsys)
    _, second = run_cli(args, capsys)
    assert payload_lines(first) == payload_lines(second)
    header, rows = parse_csv(first)
    assert header == ["basis", "outcome", "counts_clean", "counts_flipped",
                      "counts_mixed", "duration"]
    assert len(rows) == 6
    summary = {line.split("=")[0].replace("# summary.", ""): line.split("=")[1]
               for line in first.splitlines() if line.startswith("# summary.")}
    assert 0.0 < float(summary["fidelity"]) <= 1.05
    assert 1e-4 < float(summary["fidelity_stderr"]) < 1e-2


def test_tomography_requires_seed(capsys):
    with pytest.raises(SystemExit) as err:
        main(["tomography"])
    assert err.value.code == 2
    capsys.readouterr()


def test_json_envelope_round_trips(capsys):
    code, out = run_cli(["protocol", "--format", "json"], capsys)
    assert code == 0
    blob = json.loads(out)
    assert blob["schema_version"] == 1
    assert blob["command"] == "protocol"
    assert blob["columns"][0] == "scheme"
    assert len(blob["rows"]) == 1
    assert blob["config"]["theta"] == 0.715


def test_out_dir_environment_variable(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("WEAKCTRL_OUT_DIR", str(tmp_path))
    code, _ = run_cli(["protocol", "--out", "run.csv"], capsys)
    assert code == 0
    assert (tmp_path / "run.csv").exists()
