import json

import pytest

from kerrcav import cli

G = 1e8


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_config(tmp_path, cfg, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def test_check_regime_defaults(capsys):
    code, out, _ = run_cli(capsys, "check-regime")
    assert code == 0
    report = json.loads(out)
    assert report["ratios"]["dispersive_cavity"]["value"] == 0.1
    assert report["ratios"]["second_dispersive"]["value"] == 0.05


def test_check_regime_strict_warn(capsys, tmp_path):
    cfg = write_config(tmp_path, {"params": {"g": G, "theta": "0.2g"}})
    code, out, _ = run_cli(capsys, "check-regime", "--config", cfg, "--strict")
    assert code == 3
    assert json.loads(out)["ratios"]["second_dispersive"]["status"] == "warn"


def test_run_fig3b_default_csv(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "run", "fig3b", "--out", str(tmp_path))
    assert code == 0
    paths = json.loads(out)["outputs"]
    lines = open(paths["csv"]).read().strip().split("\n")
    assert lines[0] == "t_seconds,N,n,X,Y,reference,abs_error"
    assert len(lines) == 1 + 4 * 512
    report = json.loads(open(paths["json"]).read())
    assert report["config"]["scenario"] == "fig3b"


def test_run_outputs_hash_stable(capsys, tmp_path):
    code1, out1, _ = run_cli(capsys, "run", "fig3b", "--grid-points", "32",
                             "--out", str(tmp_path / "r1"))
    code2, out2, _ = run_cli(capsys, "run", "fig3b", "--grid-points", "32",
                             "--out", str(tmp_path / "r2"))
    assert code1 == code2 == 0
    p1 = json.loads(out1)["outputs"]
    p2 = json.loads(out2)["outputs"]
    assert p1["csv"].split("/")[-1] == p2["csv"].split("/")[-1]
    assert open(p1["csv"]).read() == open(p2["csv"]).read()
    assert open(p1["json"]).read() == open(p2["json"]).read()


def test_unknown_config_key(capsys, tmp_path):
    cfg = write_config(tmp_path, {"params": {"g": G}, "bogus": 1})
    code, _, err = run_cli(capsys, "check-regime", "--config", cfg)
    assert code == 2
    assert "bogus" in err


def test_unknown_param_key(capsys, tmp_path):
    cfg = write_config(tmp_path, {"params": {"g": G, "gamma": 1.0}})
    code, _, err = run_cli(capsys, "check-regime", "--config", cfg)
    assert code == 2
    assert "gamma" in err


def test_invalid_json_reports_line(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"params": {,}}')
    code, _, err = run_cli(capsys, "check-regime", "--config", str(path))
    assert code == 2
    assert "line" in err


def test_rate_suffix_parsing(capsys, tmp_path):
    cfg = write_config(tmp_path, {
        "params": {"g": G, "delta1": "20g", "theta": "1g"}})
    code, out, _ = run_cli(capsys, "check-regime", "--config", cfg)
    assert code == 0
    assert json.loads(out)["ratios"]["dispersive_cavity"]["value"] == 0.05


def test_rate_suffix_without_g(capsys, tmp_path):
    cfg = write_config(tmp_path, {"params": {"delta1": "10g"}})
    code, _, err = run_cli(capsys, "check-regime", "--config", cfg)
    assert code == 2
    assert "delta1" in err


def test_bad_rate_string(capsys, tmp_path):
    cfg = write_config(tmp_path, {"params": {"g": G, "theta": "fast"}})
    code, _, err = run_cli(capsys, "check-regime", "--config", cfg)
    assert code == 2 and "theta" in err


def test_unknown_scenario(capsys):
    code, _, err = run_cli(capsys, "run", "fig9")
    assert code == 2
    assert "fig9" in err


def test_list_scenarios(capsys):
    code, out, _ = run_cli(capsys, "list-scenarios")
    assert code == 0
    names = out.strip().split("\n")
    assert names == sorted(names)
    for expected in ("fig3a", "fig3b", "cross_polarization",
                     "cross_toroidal", "regime_check"):
        assert expected in names


def test_help_lists_subcommands(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for sub in ("run", "check-regime", "sweep", "calibrate", "list-scenarios"):
        assert sub in out


def test_run_help_lists_flags(capsys):
    with pytest.raises(SystemExit):
        cli.main(["run", "--help"])
    out = capsys.readouterr().out
    for flag in ("--config", "--out", "--mode", "--tier", "--jobs",
                 "--strict", "--frame-calibration"):
        assert flag in out


def test_config_echo_round_trip(capsys, tmp_path):
    cfg = write_config(tmp_path, {
        "scenario": "fig3b",
        "params": {"g": G, "delta1": "10g", "theta": "1g", "omega": "100g"},
        "grid": {"points": 24},
        "frame_calibration": "n1_shared",
        "output": {"dir": str(tmp_path / "out")},
    })
    code, out, _ = run_cli(capsys, "run", "--config", cfg)
    assert code == 0
    paths = json.loads(out)["outputs"]
    report = json.loads(open(paths["json"]).read())
    echoed = report["config"]
    assert echoed["grid_points"] == 24
    assert echoed["frame_calibration"] == "n1_shared"
    assert echoed["params"]["delta1"] == 10 * G
    assert echoed["params"]["omega"] == 100 * G


def test_run_cross_via_scheme(capsys, tmp_path):
    cfg = write_config(tmp_path, {
        "scheme": "cross_polarization", "scenario": "cross",
        "output": {"dir": str(tmp_path / "out")},
    })
    code, out, _ = run_cli(capsys, "run", "--config", cfg)
    assert code == 0
    report = json.loads(open(json.loads(out)["outputs"]["json"]).read())
    assert report["relative_error"] <= 0.15


def test_run_strict_regime_failure(capsys, tmp_path):
    cfg = write_config(tmp_path, {"params": {"g": G, "theta": "0.2g"}})
    code, _, err = run_cli(capsys, "run", "regime_check", "--config", cfg,
                           "--strict")
    assert code == 3
    assert "regime" in err


def test_calibrate_subcommand(capsys):
    code, out, _ = run_cli(capsys, "calibrate")
    assert code == 0
    data = json.loads(out)
    assert abs(data["pulse"]["phi_forward"] - 3.141592653589793) < 1e-3
    assert data["frame"]["flagged"] is False


def test_sweep_subcommand(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys, "sweep", "--param", "theta",
        "--values", f"{G},{2 * G}", "--scenario", "regime_check",
        "--out", str(tmp_path))
    assert code == 0
    entries = json.loads(out)
    assert [e["value"] for e in entries] == [G, 2 * G]
    assert all(e["ok"] for e in entries)


def test_sweep_missing_param(capsys):
    code, _, err = run_cli(capsys, "sweep", "--values", "1.0")
    assert code == 2
    assert "param" in err
