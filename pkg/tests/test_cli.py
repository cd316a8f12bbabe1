"""CLI behavior: exit codes, formats, golden polynomial output, determinism."""

import json

from wittram.cli import main
from wittram.harness import RunConfig, run
from wittram.report import emit_report


def test_witt_poly_golden_z(capsys):
    assert main(["witt-poly", "--p", "2", "--level", "1", "--which", "z",
                 "--arity", "2"]) == 0
    out = capsys.readouterr().out
    assert out == "-1 0:0^1 1:0^1\n1 0:1^1\n1 1:1^1\n"


def test_witt_poly_golden_f(capsys):
    assert main(["witt-poly", "--p", "2", "--level", "1", "--which", "f"]) == 0
    assert capsys.readouterr().out == "-1 0:0^1 1:0^1\n"


def test_witt_poly_golden_g(capsys):
    assert main(["witt-poly", "--p", "2", "--level", "2", "--which", "g"]) == 0
    out = capsys.readouterr().out
    assert out == "-1 0:0^3 1:0^1\n-1 0:0^2 1:0^2\n-1 0:0^1 1:0^3\n"


def test_witt_poly_zero_prints_nothing(capsys):
    assert main(["witt-poly", "--p", "2", "--level", "0", "--which", "f"]) == 0
    assert capsys.readouterr().out == ""


def test_witt_poly_rejects_foreign_arity_for_f(capsys):
    assert main(["witt-poly", "--p", "2", "--level", "1", "--which", "f",
                 "--arity", "3"]) == 2


def test_witt_poly_resource_limit(capsys):
    assert main(["witt-poly", "--p", "3", "--level", "3", "--which", "z"]) == 2


def test_extension_info(capsys):
    assert main(["extension-info", "--extension", "quadratic-sqrt2"]) == 0
    out = capsys.readouterr().out
    assert "t: 2" in out
    assert "d: 1" in out
    assert "e_L: 2" in out


def test_unknown_extension_exits_2(capsys):
    assert main(["verify", "--extension", "quadratic-sqrt5"]) == 2


def test_requires_exactly_one_extension_source(capsys):
    assert main(["verify"]) == 2
    assert main(["verify", "--extension", "a", "--spec-file", "b"]) == 2


def test_guard_violation_exits_2(capsys):
    assert main(["verify", "--extension", "quadratic-sqrt2",
                 "--precision", "2", "--m", "2"]) == 2
    err = capsys.readouterr().err
    assert "guard" in err


def test_unknown_suite_exits_2(capsys):
    assert main(["verify", "--extension", "quadratic-sqrt2",
                 "--suites", "nope"]) == 2


def test_proposition_run_passes(capsys):
    code = main(["verify", "--extension", "quadratic-gaussian", "--m", "1",
                 "--trials", "25", "--seed", "7", "--suites", "proposition"])
    assert code == 0
    out = capsys.readouterr().out
    assert "proposition" in out
    assert "PASS" in out


def test_proposition_negative_control_mode(capsys):
    # p^m = 2 <= t = 2: informational run, exit 0
    code = main(["verify", "--extension", "quadratic-sqrt2", "--m", "1",
                 "--trials", "10", "--suites", "proposition", "--format",
                 "json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    suites = doc["suites"]
    assert suites[0]["suite"] == "negative-control"
    assert suites[0]["checks"][0]["detail"]["witness_found"] is True


def test_json_report_structure(capsys):
    code = main(["verify", "--extension", "quadratic-sqrt2", "--m", "1",
                 "--trials", "10", "--seed", "1",
                 "--suites", "trace-lemmas,h1", "--format", "json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["version"] == "1"
    assert doc["config"]["extension"] == "quadratic-sqrt2"
    names = [s["suite"] for s in doc["suites"]]
    assert names == ["trace-lemmas", "h1"]
    for suite in doc["suites"]:
        assert set(suite["params"]) == {"p", "N", "t", "m"}
        for check in suite["checks"]:
            assert {"name", "status", "trials", "passes", "failures",
                    "skipped", "detail"} <= set(check)


def test_csv_report_columns(capsys):
    code = main(["verify", "--extension", "quadratic-sqrt2", "--m", "1",
                 "--trials", "5", "--suites", "h1", "--format", "csv"])
    assert code == 0
    out = capsys.readouterr().out
    header = out.splitlines()[0]
    assert header == ("suite,extension,check,p,N,t,m,status,trials,passes,"
                      "failures,skipped,detail")


def test_report_out_file(tmp_path, capsys):
    out_file = tmp_path / "report.json"
    code = main(["verify", "--extension", "quadratic-gaussian", "--m", "1",
                 "--trials", "5", "--suites", "h1", "--format", "json",
                 "--out", str(out_file)])
    assert code == 0
    doc = json.loads(out_file.read_text(encoding="utf-8"))
    assert doc["suites"][0]["suite"] == "h1"


def test_reports_are_byte_identical(tmp_path):
    args = ["verify", "--extension", "quadratic-sqrt2", "--m", "1",
            "--trials", "25", "--seed", "7", "--format", "json"]
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(f1)]) == 0
    assert main(args + ["--out", str(f2)]) == 0
    assert f1.read_bytes() == f2.read_bytes()


def test_run_config_roundtrip_without_cli():
    config = RunConfig(extension="quadratic-gaussian", m=1, trials=10,
                       seed=3, suites=("h1", "negative-control"))
    report, code = run(config)
    assert code == 0
    text = emit_report(report, "text")
    assert "h1" in text
    csv_text = emit_report(report, "csv")
    assert csv_text.splitlines()[0].startswith("suite,extension")
