import json
import os

import pytest

from diffwedge.cli import ConfigError, load_config, main, render_report, run

HERE = os.path.dirname(__file__)
CONFIGS = os.path.join(HERE, os.pardir, "configs")


def cfg_path(name):
    return os.path.join(CONFIGS, name)


def write_cfg(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_check_passes_on_shipped_configs(capsys):
    for name in ("two_planes.json", "wedge_dirac.json"):
        assert main(["check", cfg_path(name)]) == 0
        out = capsys.readouterr().out
        report = json.loads(out)
        assert report["failed"] == []


def test_check_fails_on_incompatible_scale(capsys):
    assert main(["check", cfg_path("incompatible.json")]) == 1
    report = json.loads(capsys.readouterr().out)
    assert "metric-glue-compatibility" in report["failed"]


def test_missing_config_is_exit_two(capsys):
    assert main(["check", "/nonexistent/nope.json"]) == 2
    assert "config error" in capsys.readouterr().err


def test_malformed_expression_reports_column(tmp_path, capsys):
    p = write_cfg(tmp_path, {"charts": [{"id": "a", "h": "x^^2"}]})
    assert main(["check", p]) == 2
    err = capsys.readouterr().err
    assert "column 3" in err


def test_bad_json_is_exit_two(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["check", str(p)]) == 2


def test_config_validation_paths(tmp_path):
    with pytest.raises(ConfigError, match="/fibre/dim"):
        load_config(write_cfg(tmp_path, {"fibre": {"dim": 0}}))
    with pytest.raises(ConfigError, match="duplicate"):
        load_config(write_cfg(tmp_path,
                              {"charts": [{"id": "a"}, {"id": "a"}]}))
    with pytest.raises(ConfigError, match="unknown chart"):
        load_config(write_cfg(
            tmp_path, {"charts": [{"id": "a"}],
                       "gluings": [{"points": [["a", 0], ["z", 0]]}]}))


def test_report_is_byte_stable(tmp_path):
    out1, out2 = str(tmp_path / "r1.json"), str(tmp_path / "r2.json")
    assert main(["check", cfg_path("wedge_dirac.json"), "--json", out1]) == 0
    assert main(["check", cfg_path("wedge_dirac.json"), "--json", out2]) == 0
    with open(out1, "rb") as f1, open(out2, "rb") as f2:
        assert f1.read() == f2.read()


def test_seed_changes_random_data_but_not_verdicts(capsys):
    assert main(["check", cfg_path("wedge_dirac.json"), "--seed", "5"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["seed"] == 5
    assert report["failed"] == []


def test_dual_metric_values(capsys):
    assert main(["dual-metric", cfg_path("two_planes.json")]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["values"]["dual_basis"] == [["1", "0", "0"],
                                              ["0", "1", "-1"]]
    assert report["values"]["dual_metric"] == [["2/3", "-1/3"],
                                               ["-1/3", "2/3"]]
    assert "sometimes-quoted" in report["values"]["note"]
    names = [v["name"] for v in report["verdicts"]]
    assert "dual-metric-defining-identity" in names


def test_clifford_table_command(tmp_path, capsys):
    p = write_cfg(tmp_path, {"fibre": {"dim": 2,
                                       "metric": [[1, 0], [0, 1]]}})
    assert main(["clifford-table", p]) == 0
    report = json.loads(capsys.readouterr().out)
    table = report["values"]["clifford_table"]
    assert table["e1 . e1"] == {"1": "-1"}
    (name, coeff), = table["e1 . e2"].items()
    assert name == "e1^e2" and str(coeff) == "1"
    p2 = write_cfg(tmp_path, {"charts": []}, "nofibre.json")
    assert main(["clifford-table", p2]) == 2


def test_dirac_command_values(capsys):
    assert main(["dirac", cfg_path("wedge_dirac.json")]) == 0
    report = json.loads(capsys.readouterr().out)
    rows = report["values"]["dirac"]
    assert rows, "dirac block should produce values"
    for row in rows:
        for key, val in row.items():
            assert len(val) == 2


def test_run_report_command():
    cfg = load_config(cfg_path("two_planes.json"))
    report, code = run("report", cfg)
    assert code == 0
    assert "clifford_table" in report["values"]
    assert render_report(report).endswith("\n")
