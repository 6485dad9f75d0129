import json
import math

import pytest

from backflow import scan
from backflow.core import ConfigurationError, DefectKind, DefectSpec, GaussianTest, GridSpec
from backflow.quadrature import QuadratureError
from backflow.scan import (
    CSV_HEADER,
    PRESETS,
    SweepPlan,
    convergence_study,
    default_x0_values,
    row_to_csv,
    rows_to_csv,
    run_sweep,
    write_results,
)

TINY = GridSpec(8, 4.0)


def _plan(**overrides):
    base = dict(
        defect_family=DefectKind.FREE,
        conserved=False,
        strengths=(0.0,),
        x0_values=(-1.0, 0.0, 1.0),
        sigma=0.1,
        grid=TINY,
    )
    base.update(overrides)
    return SweepPlan(**base)


def _strip(rows):
    # Everything except the wall-clock column, which is the one
    # non-deterministic field.
    return [
        (r.defect, r.strength, r.conserved, r.x0, r.sigma, r.n, r.p_cutoff, r.beta, r.residual)
        for r in rows
    ]


def test_free_sweep_translation_invariant():
    rows = run_sweep(_plan(), workers=1)
    assert len(rows) == 3
    betas = [r.beta for r in rows]
    assert max(betas) - min(betas) <= 1e-8


def test_jump_near_zero_strength_matches_free():
    free = run_sweep(_plan(x0_values=(0.0,)), workers=1)[0]
    near = run_sweep(
        _plan(defect_family=DefectKind.JUMP, strengths=(1e-8,), x0_values=(0.0,)), workers=1
    )[0]
    assert abs(near.beta - free.beta) <= 1e-6


def test_rows_ordered_by_strength_then_x0():
    plan = _plan(
        defect_family=DefectKind.DELTA,
        strengths=(2.0, -1.0),
        x0_values=(0.5, -0.5),
    )
    rows = run_sweep(plan, workers=1)
    assert [(r.strength, r.x0) for r in rows] == [
        (-1.0, -0.5), (-1.0, 0.5), (2.0, -0.5), (2.0, 0.5)
    ]


def test_sweep_is_deterministic():
    plan = _plan(defect_family=DefectKind.JUMP, conserved=True, strengths=(3.0,))
    first = run_sweep(plan, workers=1)
    second = run_sweep(plan, workers=1)
    assert _strip(first) == _strip(second)


def test_parallel_equals_serial():
    plan = _plan(defect_family=DefectKind.DELTA, strengths=(-0.5, 0.5))
    serial = run_sweep(plan, workers=1)
    parallel = run_sweep(plan, workers=2)
    assert _strip(serial) == _strip(parallel)


def test_failed_point_becomes_nan_row(monkeypatch):
    calls = {}

    def flaky(defect, test, grid):
        if test.x0 == 0.0:
            raise QuadratureError("synthetic failure", error_estimate=1.0)
        calls["ok"] = True
        return real_build(defect, test, grid)

    from backflow.spectral import build_matrix as real_build

    monkeypatch.setattr(scan, "build_matrix", flaky)
    rows = run_sweep(_plan(), workers=1)
    assert len(rows) == 3
    failed = [r for r in rows if r.x0 == 0.0]
    assert len(failed) == 1
    assert math.isnan(failed[0].beta)
    assert "synthetic failure" in failed[0].error
    assert all(not math.isnan(r.beta) for r in rows if r.x0 != 0.0)


def test_plan_validation():
    with pytest.raises(ConfigurationError):
        _plan(strengths=())
    with pytest.raises(ConfigurationError):
        _plan(x0_values=())
    with pytest.raises(ConfigurationError):
        _plan(defect_family=DefectKind.DELTA, strengths=(0.0,))
    with pytest.raises(ConfigurationError):
        _plan(defect_family=DefectKind.DELTA, strengths=(1.0,), conserved=True)
    with pytest.raises(ConfigurationError):
        _plan(strengths=(1.0,))  # free family takes the placeholder 0 only


def test_default_x0_windows():
    delta = default_x0_values(DefectKind.DELTA)
    jump = default_x0_values(DefectKind.JUMP)
    assert len(delta) == 81 and delta[0] == -2.0 and delta[-1] == 2.0
    assert len(jump) == 81 and jump[0] == -1.0 and jump[-1] == 1.0


def test_csv_schema_and_roundtrip(tmp_path):
    rows = run_sweep(_plan(x0_values=(0.0, 0.25)), workers=1)
    body = rows_to_csv(rows)
    lines = body.split("\n")
    assert lines[0] == CSV_HEADER
    assert body.endswith("\n") and "\r" not in body
    fields = lines[1].split(",")
    assert len(fields) == 10
    # 17-significant-digit decimals round-trip to the same double.
    assert float(fields[7]) == rows[0].beta
    assert float(fields[4]) == 0.1

    path = tmp_path / "out.csv"
    plan = _plan(x0_values=(0.0, 0.25))
    write_results(rows, str(path), "csv", plan, "2000-01-01T00:00:00+00:00")
    assert path.read_bytes().decode("utf-8") == body
    manifest = json.loads((tmp_path / "out.csv.manifest.json").read_text())
    assert manifest["plan"]["defect_family"] == "free"
    assert manifest["plan"]["x0_values"] == [0.0, 0.25]
    assert manifest["started_at"] == "2000-01-01T00:00:00+00:00"


def test_csv_bodies_identical_across_runs_excluding_wall():
    plan = _plan(defect_family=DefectKind.JUMP, strengths=(2.0,), x0_values=(0.0, 0.5))
    def body_without_wall(rows):
        lines = rows_to_csv(rows).splitlines()
        return [",".join(line.split(",")[:-1]) for line in lines]
    assert body_without_wall(run_sweep(plan, workers=1)) == body_without_wall(
        run_sweep(plan, workers=1)
    )


def test_json_mirrors_csv_fields(tmp_path):
    rows = run_sweep(_plan(x0_values=(0.0,)), workers=1)
    path = tmp_path / "out.json"
    write_results(rows, str(path), "json", _plan(x0_values=(0.0,)), "t0")
    data = json.loads(path.read_text())
    assert len(data) == 1
    assert set(data[0]) == {
        "defect", "strength", "conserved", "x0", "sigma",
        "n", "p_cutoff", "beta", "residual", "wall_s",
    }
    assert data[0]["beta"] == rows[0].beta


def test_nan_beta_serializes_and_roundtrips():
    row = scan.SweepRow("free", 0.0, False, 0.0, 0.1, 8, 4.0, math.nan, math.nan, 0.0, "boom")
    text = row_to_csv(row)
    beta_field = text.split(",")[7]
    assert math.isnan(float(beta_field))


def test_convergence_study_tiny():
    table = convergence_study(
        DefectSpec.free(), GaussianTest(0.0, 0.1), n_values=(2, 4), p_values=(2.0,)
    )
    assert set(table) == {(2, 2.0), (4, 2.0)}
    hand = (1.0 - math.sqrt(0.25 + math.exp(-0.01))) / (2.0 * math.pi)
    assert abs(table[(2, 2.0)] - hand) <= 1e-10


def test_convergence_study_rejects_empty():
    with pytest.raises(ConfigurationError):
        convergence_study(DefectSpec.free(), GaussianTest(0.0, 0.1), (), (2.0,))


def test_preset_catalog():
    for name in ("free-reference", "delta-peak", "delta-fig3a", "jump-fig5b",
                 "jump-fig6a-conserved", "landscape-delta", "landscape-jump-wide"):
        assert name in PRESETS

    fig6a = PRESETS["jump-fig6a"].plan()
    assert fig6a.defect_family is DefectKind.JUMP
    assert fig6a.strengths == (-9.0, 9.0)
    assert not fig6a.conserved
    assert len(fig6a.x0_values) == 81
    assert fig6a.x0_values[0] == -1.0 and fig6a.x0_values[-1] == 1.0
    assert fig6a.grid == scan.REDUCED_GRID
    assert PRESETS["jump-fig6a-conserved"].plan().conserved
    assert PRESETS["jump-fig6a"].plan(full=True).grid == scan.FULL_GRID

    peak = PRESETS["delta-peak"].plan()
    assert peak.strengths == (-0.6, -0.5, -0.4)

    landscape = PRESETS["landscape-delta"].plan()
    assert len(landscape.strengths) == 40
    assert 0.0 not in landscape.strengths
