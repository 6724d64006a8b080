import json

import pytest

from gaudin.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_build_quadratic_notes_zero_sum(tmp_path, capsys):
    code, out, _ = run_cli([
        "build", "--what", "quadratic", "--r", "2", "--sites", "3",
        "--poles", "0,1,2", "--out", str(tmp_path),
    ], capsys)
    assert code == 0
    doc = json.loads(out)
    assert len(doc["hamiltonians"]) == 3
    assert doc["sum_is_zero"] is True
    assert (tmp_path / "build-quadratic.json").exists()


def test_build_bending_two_sites(tmp_path, capsys):
    code, out, _ = run_cli([
        "build", "--what", "bending", "--k", "1", "--sites", "2",
        "--out", str(tmp_path),
    ], capsys)
    assert code == 0
    doc = json.loads(out)
    entry = doc["matrix"]["entries"][0][0]
    assert entry == "(z) * x[1,1]@1 + (1) * x[1,1]@2"


def test_build_text_rendering_has_no_verdict_line(tmp_path, capsys):
    code, out, _ = run_cli([
        "build", "--what", "quadratic", "--r", "2", "--sites", "2",
        "--poles", "0,1", "--format", "text", "--out", str(tmp_path),
    ], capsys)
    assert code == 0
    assert "overall:" not in out
    assert "sum_is_zero: true" in out


def test_build_rejects_repeated_poles(tmp_path, capsys):
    code, _, err = run_cli([
        "build", "--what", "gaudin", "--poles", "0,0,1", "--out", str(tmp_path),
    ], capsys)
    assert code == 2
    assert "repeated" in err


def test_verify_quadratic_rank_one(tmp_path, capsys):
    code, out, _ = run_cli([
        "verify", "quadratic", "--r", "1", "--sites", "2", "--out", str(tmp_path),
    ], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert doc["config"]["seed"] == 12345


def test_verify_reports_are_deterministic(tmp_path, capsys):
    args = ["verify", "quadratic", "--r", "1", "--sites", "2",
            "--seed", "7", "--out", str(tmp_path)]
    code1, out1, _ = run_cli(args, capsys)
    first = (tmp_path / "verify-quadratic.json").read_bytes()
    code2, out2, _ = run_cli(args, capsys)
    second = (tmp_path / "verify-quadratic.json").read_bytes()
    assert code1 == code2 == 0
    assert out1 == out2
    assert first == second


def test_pattern_infers_site_count(tmp_path, capsys):
    code, out, _ = run_cli([
        "verify", "glue", "--pattern", "[1,2,[3,4,5]@3]", "--r", "2",
        "--out", str(tmp_path),
    ], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["sites"] == 5
    assert doc["pass"] is True


def test_verify_glue_with_pattern(tmp_path, capsys):
    code, out, _ = run_cli([
        "verify", "glue", "--pattern", "[1,[2,3]@3]", "--r", "2", "--sites", "3",
        "--out", str(tmp_path),
    ], capsys)
    assert code == 0
    doc = json.loads(out)
    names = [c["check"] for c in doc["checks"]]
    assert "rank_completeness" in names and "hg_membership" in names


def test_verify_exit_code_contract(tmp_path, capsys):
    # evaluation points colliding with poles is a configuration error
    code, _, err = run_cli([
        "verify", "glue", "--pattern", "[1,[2,3]@5]", "--sites", "3",
        "--eval", "5,7", "--out", str(tmp_path),
    ], capsys)
    assert code == 2
    assert "pole" in err


def test_unknown_suite_is_usage_error(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense", "--out", str(tmp_path)])
    assert exc.value.code == 2


def test_desk_scale_guard(tmp_path, capsys):
    code, _, err = run_cli([
        "verify", "quadratic", "--sites", "6", "--out", str(tmp_path),
    ], capsys)
    assert code == 2
    assert "desk-scale" in err


def test_config_file_mirrors_flags(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("rank=1\nsites=2\nseed=99\n# comment\nformat=json\n")
    code, out, _ = run_cli([
        "verify", "quadratic", "--config", str(cfg), "--out", str(tmp_path),
    ], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["rank"] == 1
    assert doc["config"]["seed"] == 99


def test_cli_flag_overrides_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("rank=1\nseed=99\n")
    code, out, _ = run_cli([
        "verify", "quadratic", "--config", str(cfg), "--sites", "2",
        "--seed", "100", "--out", str(tmp_path),
    ], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["seed"] == 100


def test_export_latex(tmp_path, capsys):
    run_cli(["verify", "quadratic", "--r", "1", "--sites", "2",
             "--out", str(tmp_path)], capsys)
    code, out, _ = run_cli([
        "export", "--run", str(tmp_path), "--format", "latex",
    ], capsys)
    assert code == 0
    assert r"\begin{tabular}" in out


def test_export_missing_artifacts(tmp_path, capsys):
    code, _, err = run_cli([
        "export", "--run", str(tmp_path / "empty"), "--format", "text",
    ], capsys)
    assert code == 2
    assert "no artifacts" in err


def test_build_pattern_family(tmp_path, capsys):
    code, out, _ = run_cli([
        "build", "--what", "pattern", "--pattern", "[[1,2]@5,3]",
        "--sites", "3", "--out", str(tmp_path),
    ], capsys)
    assert code == 0
    doc = json.loads(out)
    assert len(doc["family"]["matrices"]) == 2
    assert doc["commutation"]["pass"] is True
    assert all("power" in m for m in doc["invariants"]["members"])


def test_build_talalaev_rank_one(tmp_path, capsys):
    code, out, _ = run_cli([
        "build", "--what", "talalaev", "--r", "1", "--sites", "2",
        "--poles", "0,1", "--eval", "5", "--out", str(tmp_path),
    ], capsys)
    assert code == 0
    doc = json.loads(out)
    qh = doc["talalaev"]["qh"]
    assert qh["1"] == "(1)"
    assert "e[1,1]@1" in qh["0"] and "e[1,1]@2" in qh["0"]
    assert doc["evaluations"]["5"]["qh"][1] == "1"
