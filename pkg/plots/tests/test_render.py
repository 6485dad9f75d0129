import math
import subprocess
import sys

import pytest

from backflow_plots.cli import main as cli_main
from backflow_plots.figures import FigureSpec, render
from backflow_plots.reader import SchemaError, read_table

HEADER = "defect,strength,conserved,x0,sigma,n,p_cutoff,beta,residual,wall_s"


def _row(defect="jump", strength=9.0, conserved=False, x0=0.0, beta=-0.24):
    return (f"{defect},{strength},{'true' if conserved else 'false'},{x0},0.1,"
            f"500,100,{beta},1e-13,0.5")


def _curve_csv(path, strengths=(9.0, -9.0), conserved=(False,), n_x0=9, with_free=False):
    lines = [HEADER]
    for s in strengths:
        for c in conserved:
            for i in range(n_x0):
                x0 = -1.0 + 2.0 * i / (n_x0 - 1)
                beta = -0.24 + 0.05 * math.sin(3.0 * x0 + s / 9.0) * (0.5 if c else 1.0)
                lines.append(_row(strength=s, conserved=c, x0=x0, beta=beta))
    if with_free:
        lines.append(_row(defect="free", strength=0.0, x0=0.0, beta=-0.241))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _landscape_csv(path, n_s=5, n_x=7, with_nan=True):
    lines = [HEADER]
    for i in range(n_s):
        s = -2.0 + i
        if s == 0.0:
            s = 0.5
        for j in range(n_x):
            x0 = -1.0 + 2.0 * j / (n_x - 1)
            beta = "nan" if (with_nan and i == 2 and j == 3) else f"{-0.2 - 0.01 * i * j}"
            lines.append(_row(defect="delta", strength=s, x0=x0, beta=beta))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_reader_parses_valid_table(tmp_path):
    path = _curve_csv(tmp_path / "ok.csv", with_free=True)
    table = read_table(str(path))
    assert len(table.rows) == 2 * 9 + 1
    assert table.rows[0].defect == "jump"
    assert table.rows[-1].defect == "free"
    assert table.rows[0].conserved is False


def test_reader_names_offending_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(HEADER.replace("p_cutoff", "pcut") + "\n", encoding="utf-8")
    with pytest.raises(SchemaError) as excinfo:
        read_table(str(path))
    assert "'pcut'" in str(excinfo.value)
    assert "'p_cutoff'" in str(excinfo.value)


def test_reader_rejects_extra_column(tmp_path):
    path = tmp_path / "extra.csv"
    path.write_text(HEADER + ",note\n", encoding="utf-8")
    with pytest.raises(SchemaError) as excinfo:
        read_table(str(path))
    assert "note" in str(excinfo.value)


def test_reader_rejects_bad_boolean(tmp_path):
    path = tmp_path / "badbool.csv"
    path.write_text(HEADER + "\n" + _row().replace("false", "maybe") + "\n", encoding="utf-8")
    with pytest.raises(SchemaError) as excinfo:
        read_table(str(path))
    assert "conserved" in str(excinfo.value)


def test_curve_render_is_byte_identical(tmp_path):
    csv = _curve_csv(tmp_path / "curve.csv", with_free=True)
    out1, out2 = tmp_path / "a.svg", tmp_path / "b.svg"
    for out in (out1, out2):
        render(FigureSpec(inputs=(str(csv),), kind="curve", out=str(out)))
    first, second = out1.read_bytes(), out2.read_bytes()
    assert first == second
    assert first.startswith(b"<?xml")


def test_curve_reference_line_from_free_row(tmp_path):
    csv = _curve_csv(tmp_path / "curve.csv", with_free=True)
    out = tmp_path / "fig.svg"
    render(FigureSpec(inputs=(str(csv),), kind="curve", out=str(out)))
    text = out.read_text()
    assert "free reference (-0.241)" in text


def test_curve_reference_from_flag_when_no_free_row(tmp_path):
    csv = _curve_csv(tmp_path / "curve.csv", with_free=False)
    out = tmp_path / "fig.svg"
    with pytest.raises(SchemaError):
        render(FigureSpec(inputs=(str(csv),), kind="curve", out=str(out)))
    render(FigureSpec(inputs=(str(csv),), kind="curve", out=str(out), beta0=-0.241))
    assert "free reference (-0.241)" in out.read_text()


def test_curve_needs_two_positions(tmp_path):
    path = tmp_path / "single.csv"
    path.write_text(HEADER + "\n" + _row() + "\n", encoding="utf-8")
    with pytest.raises(SchemaError) as excinfo:
        render(FigureSpec(inputs=(str(path),), kind="curve", out=str(tmp_path / "x.svg")))
    assert "2 distinct x0" in str(excinfo.value)


def test_curve_four_series_from_two_inputs(tmp_path):
    nc = _curve_csv(tmp_path / "nc.csv", conserved=(False,))
    c = _curve_csv(tmp_path / "c.csv", conserved=(True,))
    out = tmp_path / "four.svg"
    render(FigureSpec(inputs=(str(nc), str(c)), kind="curve", out=str(out), beta0=-0.241))
    text = out.read_text()
    assert "alpha = +9, non-conserved" in text
    assert "alpha = +9, conserved" in text
    assert "alpha = -9, non-conserved" in text
    assert "alpha = -9, conserved" in text


def test_landscape_renders_heatmap_and_surface(tmp_path):
    csv = _landscape_csv(tmp_path / "land.csv")
    out = tmp_path / "land.svg"
    render(FigureSpec(inputs=(str(csv),), kind="landscape", out=str(out)))
    assert out.stat().st_size > 0


def test_landscape_rejects_incomplete_grid(tmp_path):
    csv = _landscape_csv(tmp_path / "land.csv", with_nan=False)
    lines = csv.read_text().splitlines()
    csv.write_text("\n".join(lines[:-1]) + "\n", encoding="utf-8")  # drop one point
    with pytest.raises(SchemaError) as excinfo:
        render(FigureSpec(inputs=(str(csv),), kind="landscape", out=str(tmp_path / "x.svg")))
    assert "incomplete" in str(excinfo.value)


def test_landscape_determinism(tmp_path):
    csv = _landscape_csv(tmp_path / "land.csv")
    outs = [tmp_path / "l1.svg", tmp_path / "l2.svg"]
    for out in outs:
        render(FigureSpec(inputs=(str(csv),), kind="landscape", out=str(out)))
    assert outs[0].read_bytes() == outs[1].read_bytes()


def test_png_output(tmp_path):
    csv = _curve_csv(tmp_path / "curve.csv", with_free=True)
    out = tmp_path / "fig.png"
    render(FigureSpec(inputs=(str(csv),), kind="curve", out=str(out), fmt="png"))
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_cli_render(tmp_path, capsys):
    csv = _curve_csv(tmp_path / "curve.csv", with_free=True)
    out = tmp_path / "fig.svg"
    code = cli_main(["render", "--input", str(csv), "--kind", "curve", "--out", str(out)])
    assert code == 0
    assert out.exists()


def test_cli_schema_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("nope\n", encoding="utf-8")
    code = cli_main(["render", "--input", str(path), "--kind", "curve",
                     "--out", str(tmp_path / "x.svg")])
    assert code == 2
    assert "column" in capsys.readouterr().err


def _backflow_available():
    try:
        import backflow  # noqa: F401
        return True
    except ImportError:
        return False


@pytest.mark.skipif(not _backflow_available(), reason="primary package not installed")
def test_jump_preset_csv_renders_deterministically(tmp_path):
    # End to end against the real producer: a jump figure preset pair plus
    # the free reference, on a tiny grid override.
    def run_scan(preset, out):
        proc = subprocess.run(
            [sys.executable, "-m", "backflow", "scan", "--preset", preset,
             "--n", "6", "--pcut", "3", "--out", str(out), "--threads", "1"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr

    nc, c, free = tmp_path / "nc.csv", tmp_path / "c.csv", tmp_path / "free.csv"
    run_scan("jump-fig6a", nc)
    run_scan("jump-fig6a-conserved", c)
    run_scan("free-reference", free)

    outs = [tmp_path / "fig_a.svg", tmp_path / "fig_b.svg"]
    for out in outs:
        render(FigureSpec(inputs=(str(nc), str(c), str(free)), kind="curve", out=str(out)))
    assert outs[0].read_bytes() == outs[1].read_bytes()

    reference = next(
        row.beta for row in read_table(str(free)).rows if row.defect == "free"
    )
    assert f"free reference ({reference:.4g})" in outs[0].read_text()
