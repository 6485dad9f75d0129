import json
import math
import subprocess
import sys

from backflow import cli
from backflow.scan import CSV_HEADER


def run_cli(*argv):
    return cli.main(list(argv))


def test_beta_free_tiny_grid(capsys):
    code = run_cli("beta", "--defect", "free", "--x0", "0", "--n", "8", "--pcut", "4")
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0] == CSV_HEADER
    fields = out[1].split(",")
    assert fields[0] == "free"
    assert math.isfinite(float(fields[7]))


def test_beta_delta_small_grid(capsys):
    code = run_cli("beta", "--defect", "delta", "--strength", "1", "--x0", "0",
                   "--n", "2", "--pcut", "2")
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    beta = float(out[1].split(",")[7])
    assert math.isfinite(beta)
    assert beta < 0


def test_beta_jump_zero_strength_directs_to_free(capsys):
    code = run_cli("beta", "--defect", "jump", "--strength", "0", "--x0", "0")
    err = capsys.readouterr().err
    assert code == 2
    assert "--defect free" in err


def test_beta_free_rejects_strength(capsys):
    assert run_cli("beta", "--defect", "free", "--strength", "1") == 2


def test_beta_conserved_requires_jump(capsys):
    assert run_cli("beta", "--defect", "delta", "--strength", "1", "--conserved",
                   "--n", "4", "--pcut", "2") == 2


def test_scan_preset_with_grid_override(tmp_path, capsys):
    out = tmp_path / "peak.csv"
    code = run_cli("scan", "--preset", "delta-peak", "--n", "8", "--pcut", "4",
                   "--out", str(out), "--threads", "2")
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 3 * 81
    strengths = sorted({float(line.split(",")[1]) for line in lines[1:]})
    assert strengths == [-0.6, -0.5, -0.4]
    manifest = json.loads((tmp_path / "peak.csv.manifest.json").read_text())
    assert manifest["preset"] == "delta-peak"
    assert manifest["plan"]["n"] == 8


def test_scan_jump_preset_row_count(tmp_path, capsys):
    out = tmp_path / "fig6a.csv"
    code = run_cli("scan", "--preset", "jump-fig6a", "--n", "6", "--pcut", "3",
                   "--out", str(out), "--threads", "2")
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 2 * 81  # alpha = -9 and +9
    assert {line.split(",")[2] for line in lines[1:]} == {"false"}


def test_scan_unknown_preset_lists_catalog(capsys):
    code = run_cli("scan", "--preset", "nope", "--out", "/tmp/unused.csv")
    err = capsys.readouterr().err
    assert code == 2
    assert "delta-peak" in err


def test_scan_empty_strengths(capsys):
    code = run_cli("scan", "--defect", "delta", "--strengths", "", "--out", "/tmp/unused.csv")
    assert code == 2


def test_scan_custom_json_output(tmp_path, capsys):
    out = tmp_path / "rows.json"
    code = run_cli("scan", "--defect", "jump", "--strengths", "2.0", "--conserved",
                   "--x0-count", "3", "--n", "6", "--pcut", "3",
                   "--out", str(out), "--format", "json")
    assert code == 0
    data = json.loads(out.read_text())
    assert len(data) == 3
    assert all(row["conserved"] for row in data)


def test_scan_outputs_byte_identical_modulo_wall(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert run_cli("scan", "--defect", "free", "--x0-count", "3",
                       "--n", "6", "--pcut", "3", "--out", str(p), "--threads", "1") == 0

    def masked(path):
        lines = path.read_text().splitlines()
        return [",".join(line.split(",")[:-1]) for line in lines]

    assert masked(paths[0]) == masked(paths[1])


def test_validate_default(capsys):
    code = run_cli("validate")
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("PASS") >= 6
    assert "7/7 suites passed" in out


def test_validate_single_suite(capsys):
    code = run_cli("validate", "--suite", "conservation")
    out = capsys.readouterr().out
    assert code == 0
    assert "1/1 suites passed" in out


def test_validate_unknown_suite(capsys):
    assert run_cli("validate", "--suite", "bogus") == 2


def test_validate_fault_injection_fails(capsys):
    code = run_cli("validate", "--suite", "spectral", "--inject-fault", "hermiticity")
    out = capsys.readouterr().out
    assert code == 1
    assert "FAIL" in out


def test_conservation_jump(capsys):
    code = run_cli("conservation", "--defect", "jump", "--strength", "3", "--seed", "7")
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("PASS") == 4


def test_conservation_delta_reports_momentum_note(capsys):
    code = run_cli("conservation", "--defect", "delta", "--strength", "2")
    out = capsys.readouterr().out
    assert code == 0
    assert "non-conserved" in out
    assert "closed form" in out


def test_conservation_zero_strength(capsys):
    assert run_cli("conservation", "--defect", "delta", "--strength", "0") == 2


def test_threads_env_fallback(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv("BACKFLOW_THREADS", "not-a-number")
    code = run_cli("scan", "--defect", "free", "--x0-count", "2",
                   "--n", "4", "--pcut", "2", "--out", str(tmp_path / "x.csv"))
    assert code == 2
    monkeypatch.setenv("BACKFLOW_THREADS", "1")
    code = run_cli("scan", "--defect", "free", "--x0-count", "2",
                   "--n", "4", "--pcut", "2", "--out", str(tmp_path / "y.csv"))
    assert code == 0


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "backflow", "--version"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "backflow" in proc.stdout


def test_help_lists_presets():
    proc = subprocess.run(
        [sys.executable, "-m", "backflow", "scan", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    for name in ("delta-peak", "jump-fig6a-conserved", "landscape-jump-wide"):
        assert name in proc.stdout
