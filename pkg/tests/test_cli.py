import json
import math

import pytest

from solshoot import cli
from solshoot.errors import EventNotReached


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def parse_csv(text):
    meta, columns, rows = {}, None, []
    for line in text.splitlines():
        if line.startswith("# columns: "):
            columns = tuple(line[len("# columns: ") :].split(","))
        elif line.startswith("# "):
            key, _, value = line[2:].partition(" = ")
            meta[key] = value
        else:
            rows.append(line.split(","))
    return meta, columns, rows


# ------------------------------------------------------------ happy paths


def test_root_finds_round_soliton(capsys):
    code, out = run(capsys, ["root", "--guess", "0.05,-0.8,0.6"])
    assert code == 0
    meta, columns, rows = parse_csv(out)
    assert columns == (
        "delta1",
        "delta2",
        "delta3",
        "residual_inf",
        "iterations",
        "converged",
    )
    assert len(rows) == 1
    d1, d2, d3 = (float(v) for v in rows[0][:3])
    assert abs(d1 - 1.0 / 18.0) < 1e-6
    assert abs(d2 - (-7.0 / 9.0)) < 1e-6
    assert abs(d3 - 1.0 / math.sqrt(3.0)) < 1e-6
    assert int(rows[0][4]) <= 25
    assert rows[0][5] == "true"


def test_verify_delta3_passes(capsys):
    code, out = run(capsys, ["verify-delta3"])
    assert code == 0
    _, columns, rows = parse_csv(out)
    assert columns == ("closed_form", "quadrature", "first_term", "status")
    assert rows[0][-1] == "pass"
    assert float(rows[0][0]) > 1.0
    assert float(rows[0][2]) >= 1.89


def test_shoot_s1_reports_meet(capsys):
    code, out = run(capsys, ["shoot-s1", "--delta1", "0.0555"])
    assert code == 0
    meta, columns, rows = parse_csv(out)
    assert columns == ("delta1", "l1", "l2", "r", "t_meet", "n_nodes")
    l1, l2, r = (float(v) for v in rows[0][1:4])
    assert l1 < 0.0 < r


def test_exploratory_admits_negative_delta1(capsys):
    code, out = run(capsys, ["shoot-s1", "--delta1", "-0.5", "--exploratory"])
    assert code == 0
    meta, _, _ = parse_csv(out)
    assert meta["exploratory"] == "true"


def test_mismatch_near_root_is_small(capsys):
    code, out = run(
        capsys,
        [
            "mismatch",
            "--delta1",
            "0.0555555555",
            "--delta2",
            "-0.7777777777",
            "--delta3",
            "0.5773502691",
        ],
    )
    assert code == 0
    _, columns, rows = parse_csv(out)
    assert columns[-1] == "f_inf"
    assert float(rows[0][-1]) < 1e-5


def test_verify_maxprinciple_suite_passes(capsys):
    code, out = run(capsys, ["verify-maxprinciple"])
    assert code == 0
    _, _, rows = parse_csv(out)
    cases = {row[0]: row for row in rows}
    assert set(cases) == {"round-s1", "round-s2", "gaussian"}
    for row in rows:
        assert float(row[1]) >= -1e-8
        assert float(row[3]) >= -1e-8
        assert int(row[5]) == 0
        assert row[-1] == "pass"


def test_verify_maxprinciple_custom_params_report_only(capsys):
    code, out = run(capsys, ["verify-maxprinciple", "--delta1", "0.4"])
    assert code == 0
    _, _, rows = parse_csv(out)
    assert len(rows) == 1
    assert rows[0][0] == "custom-s1"
    assert rows[0][-1] == "report"


def test_compare_bryant_record(capsys):
    code, out = run(capsys, ["compare-bryant", "--delta1", "1000"])
    assert code == 0
    _, columns, rows = parse_csv(out)
    assert columns == ("delta1", "p_squared", "sup_dev", "c_obs", "status")
    assert abs(float(rows[0][1]) - 1e-3) < 1e-15
    assert rows[0][-1] == "pass"


# ------------------------------------------------------- headers and files


def test_header_echoes_full_configuration(capsys):
    code, out = run(
        capsys,
        ["verify-delta3", "--tol-rel", "1e-9", "--t-eps", "2e-4"],
    )
    assert code == 0
    meta, _, _ = parse_csv(out)
    assert meta["tool"] == "solshoot"
    assert meta["subcommand"] == "verify-delta3"
    assert float(meta["tol_rel"]) == 1e-9
    assert float(meta["tol_abs"]) == 1e-12
    assert float(meta["t_eps"]) == 2e-4
    assert meta["exploratory"] == "false"
    assert meta["format"] == "csv"
    assert meta["random_free"] == "true"
    assert int(meta["workers"]) >= 1
    assert "version" in meta


def test_reruns_are_byte_identical(capsys):
    _, first = run(capsys, ["shoot-s2", "--delta2", "-0.5", "--delta3", "0.5"])
    _, second = run(capsys, ["shoot-s2", "--delta2", "-0.5", "--delta3", "0.5"])
    assert first == second


def test_sweep_defaults_to_named_file(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run(capsys, ["curve", "--range", "0.05,0.06", "--n", "3"])
    assert code == 0
    assert out == ""
    text = (tmp_path / "curve.csv").read_text()
    meta, columns, rows = parse_csv(text)
    assert columns == (
        "delta1",
        "l1",
        "l2",
        "r",
        "min_k_t1",
        "min_k_s",
        "min_k_m",
        "min_k_t2",
        "status",
    )
    assert len(rows) == 3
    assert all(row[-1] == "ok" for row in rows)


def test_out_flag_overrides_default(tmp_path, capsys):
    target = tmp_path / "sweep.csv"
    code, _ = run(
        capsys,
        ["curve", "--range", "0.05,0.06", "--n", "2", "--out", str(target)],
    )
    assert code == 0
    assert target.exists()


def test_report_defaults_to_stdout(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run(capsys, ["verify-delta3"])
    assert code == 0
    assert "closed_form" in out
    assert list(tmp_path.iterdir()) == []


def test_json_document_shape(capsys):
    code, out = run(capsys, ["verify-delta3", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["subcommand"] == "verify-delta3"
    assert doc["meta"]["format"] == "json"
    record = doc["records"][0]
    assert set(record) == {"closed_form", "quadrature", "first_term", "status"}
    assert record["status"] == "pass"


def test_scan_meta_reports_grid_bound(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, _ = run(capsys, ["scan", "--resolution", "4"])
    assert code == 0
    meta, columns, rows = parse_csv((tmp_path / "scan.csv").read_text())
    assert columns == ("delta1", "delta2", "delta3", "f_inf", "n_nodes", "i1", "i2", "i3")
    assert float(meta["grid_bound"]) > 0.0
    assert int(meta["n_failed"]) == 0
    assert int(meta["n_minima"]) == len(rows)


def test_pancake_build_writes_profile(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, _ = run(capsys, ["pancake-build", "--length", "10", "--grid-n", "1000"])
    assert code == 0
    meta, columns, rows = parse_csv((tmp_path / "pancake-build.csv").read_text())
    assert columns == ("r", "f1", "f2")
    assert len(rows) == 1001
    assert float(meta["volume"]) > 0.0
    assert float(meta["diameter_low"]) == 11.0
    assert float(meta["max_smoothness_residual"]) < 1e-6


def test_pancake_curvature_passes(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, _ = run(capsys, ["pancake-curvature", "--length", "10", "--grid-n", "1000"])
    assert code == 0
    meta, columns, rows = parse_csv((tmp_path / "pancake-curvature.csv").read_text())
    assert columns == ("r", "f1", "f2", "k_t1", "k_t2", "k_s", "k_m", "S")
    assert len(rows) == 1001
    assert float(meta["min_eig"]) >= -1e-9
    assert float(meta["s_min"]) == 2.0
    assert meta["status"] == "pass"


# ---------------------------------------------------------------- failures


def test_inadmissible_parameter_exits_64(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code, out = run(capsys, ["shoot-s1", "--delta1", "-1"])
    assert code == 64
    _, columns, rows = parse_csv(out)
    assert columns == ("error", "message")
    assert rows[0][0] == "InadmissibleParameters"


def test_infeasible_blend_exits_64(tmp_path, monkeypatch, capsys):
    # error records land on the subcommand's usual output target, which for
    # a sweep is its default file
    monkeypatch.chdir(tmp_path)
    code, _ = run(capsys, ["pancake-build", "--length", "10", "--f2-window", "0.5,3.0"])
    assert code == 64
    _, columns, rows = parse_csv((tmp_path / "pancake-build.csv").read_text())
    assert columns == ("error", "message")
    assert rows[0][0] == "BlendInfeasible"


def test_numerical_failure_exits_2(monkeypatch, capsys):
    def explode(*args, **kwargs):
        raise EventNotReached("meet not reached before horizon, norm grew")

    monkeypatch.setattr(cli.shooting, "shoot_curve_point", explode)
    code, out = run(capsys, ["shoot-s1", "--delta1", "0.1"])
    assert code == 2
    _, columns, rows = parse_csv(out)
    assert columns == ("error", "message")
    assert rows[0][0] == "EventNotReached"
    # the message stays a single CSV field
    assert len(rows[0]) == 2


def test_unknown_subcommand_exits_64(capsys):
    assert cli.main(["nosuchthing"]) == 64
    capsys.readouterr()


def test_missing_required_argument_exits_64(capsys):
    assert cli.main(["root"]) == 64
    capsys.readouterr()


def test_malformed_triple_exits_64(capsys):
    assert cli.main(["root", "--guess", "0.1,0.2"]) == 64
    capsys.readouterr()


def test_no_subcommand_exits_64(capsys):
    assert cli.main([]) == 64
    capsys.readouterr()


def test_version_exits_zero(capsys):
    assert cli.main(["--version"]) == 0
    assert "solshoot" in capsys.readouterr().out


def test_status_strings_are_comma_safe():
    assert "," not in cli._safe("a, b, c")
    assert "\n" not in cli._safe("two\nlines")
