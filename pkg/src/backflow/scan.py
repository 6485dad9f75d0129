"""Sweep orchestration: beta against measurement position and defect
strength, convergence studies, presets for the standard figures, and
deterministic CSV/JSON persistence.

Sweep points are independent pure computations; a process pool of
configurable width executes them and the collector restores (strength, x0)
order, so parallel and serial runs produce identical rows.  Failures at a
single point are recorded as NaN-sentinel rows instead of aborting the
sweep.
"""
from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .core import (
    ConfigurationError,
    DefectKind,
    DefectSpec,
    GaussianTest,
    GridSpec,
    NumericalError,
)
from .spectral import build_matrix, lowest_eigenpair

CSV_HEADER = "defect,strength,conserved,x0,sigma,n,p_cutoff,beta,residual,wall_s"

REDUCED_GRID = GridSpec(500, 100.0)   # desk-scale default for presets
FULL_GRID = GridSpec(2000, 200.0)     # reference resolution

DEFAULT_X0_COUNT = 81
_X0_WINDOW = {DefectKind.FREE: (-1.0, 1.0), DefectKind.DELTA: (-2.0, 2.0), DefectKind.JUMP: (-1.0, 1.0)}


def default_x0_values(kind: DefectKind, count: int = DEFAULT_X0_COUNT) -> tuple[float, ...]:
    lo, hi = _X0_WINDOW[DefectKind(kind)]
    return tuple(float(x) for x in np.linspace(lo, hi, count))


@dataclass(frozen=True)
class SweepPlan:
    defect_family: DefectKind
    conserved: bool
    strengths: tuple[float, ...]
    x0_values: tuple[float, ...]
    sigma: float
    grid: GridSpec
    support_halfwidth_factor: float = 8.0

    def __post_init__(self):
        family = DefectKind(self.defect_family)
        object.__setattr__(self, "defect_family", family)
        object.__setattr__(self, "strengths", tuple(float(s) for s in self.strengths))
        object.__setattr__(self, "x0_values", tuple(float(x) for x in self.x0_values))
        if not self.strengths or not self.x0_values:
            raise ConfigurationError("strengths and x0_values must be nonempty")
        if family is DefectKind.FREE:
            if any(s != 0.0 for s in self.strengths):
                raise ConfigurationError("free sweeps take the single placeholder strength 0")
        else:
            if any(s == 0.0 or not math.isfinite(s) for s in self.strengths):
                raise ConfigurationError(
                    "strengths must be finite and nonzero; sweep the free family for 0"
                )
        if self.conserved and family is not DefectKind.JUMP:
            raise ConfigurationError("conserved flag only applies to jump sweeps")

    def defect_for(self, strength: float) -> DefectSpec:
        if self.defect_family is DefectKind.FREE:
            return DefectSpec.free()
        if self.defect_family is DefectKind.DELTA:
            return DefectSpec.delta(strength)
        return DefectSpec.jump(strength, self.conserved)


@dataclass(frozen=True)
class SweepRow:
    defect: str
    strength: float
    conserved: bool
    x0: float
    sigma: float
    n: int
    p_cutoff: float
    beta: float
    residual: float
    wall_s: float
    error: str | None = None


def compute_point(plan: SweepPlan, strength: float, x0: float) -> SweepRow:
    """One (strength, x0) evaluation; numerical failures become NaN rows."""
    defect = plan.defect_for(strength)
    test = GaussianTest(x0, plan.sigma, plan.support_halfwidth_factor)
    start = time.perf_counter()
    try:
        matrix = build_matrix(defect, test, plan.grid)
        result = lowest_eigenpair(matrix)
        beta, residual, error = result.beta, result.residual_norm, None
    except NumericalError as exc:
        beta, residual, error = math.nan, math.nan, str(exc)
    wall = time.perf_counter() - start
    return SweepRow(
        defect=plan.defect_family.value,
        strength=strength,
        conserved=plan.conserved,
        x0=x0,
        sigma=plan.sigma,
        n=plan.grid.n,
        p_cutoff=plan.grid.p_cutoff,
        beta=beta,
        residual=residual,
        wall_s=wall,
        error=error,
    )


def _point_job(args) -> SweepRow:
    return compute_point(*args)


def run_sweep(plan: SweepPlan, workers: int | None = None) -> list[SweepRow]:
    """One row per (strength, x0) pair, ordered by (strength, x0)."""
    points = [(plan, s, x0) for s in sorted(plan.strengths) for x0 in sorted(plan.x0_values)]
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(points) == 1:
        return [_point_job(p) for p in points]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_point_job, points))


def convergence_study(
    defect: DefectSpec,
    test: GaussianTest,
    n_values,
    p_values,
) -> dict[tuple[int, float], float]:
    """beta for every (n, p_cutoff) combination; stabilization is expected
    as both grow but is not enforced here."""
    if not n_values or not p_values:
        raise ConfigurationError("n_values and p_values must be nonempty")
    table: dict[tuple[int, float], float] = {}
    for n in n_values:
        for p in p_values:
            grid = GridSpec(int(n), float(p))
            table[(int(n), float(p))] = lowest_eigenpair(build_matrix(defect, test, grid)).beta
    return table


# ---------------------------------------------------------------------------
# Persistence: exact CSV schema, JSON mirror, run manifest, atomic writes.

def _fmt(x: float) -> str:
    return format(x, ".17g")


def row_to_csv(row: SweepRow) -> str:
    return ",".join([
        row.defect,
        _fmt(row.strength),
        "true" if row.conserved else "false",
        _fmt(row.x0),
        _fmt(row.sigma),
        str(row.n),
        _fmt(row.p_cutoff),
        _fmt(row.beta),
        _fmt(row.residual),
        _fmt(row.wall_s),
    ])


def rows_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    lines.extend(row_to_csv(r) for r in rows)
    return "\n".join(lines) + "\n"


def row_to_object(row: SweepRow) -> dict:
    obj = {
        "defect": row.defect,
        "strength": row.strength,
        "conserved": row.conserved,
        "x0": row.x0,
        "sigma": row.sigma,
        "n": row.n,
        "p_cutoff": row.p_cutoff,
        "beta": row.beta,
        "residual": row.residual,
        "wall_s": row.wall_s,
    }
    if row.error is not None:
        obj["error"] = row.error
    return obj


def _atomic_write_bytes(path: str, data: bytes) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as handle:
        handle.write(data)
    os.replace(tmp, path)


def plan_to_object(plan: SweepPlan) -> dict:
    return {
        "defect_family": plan.defect_family.value,
        "conserved": plan.conserved,
        "strengths": list(plan.strengths),
        "x0_values": list(plan.x0_values),
        "sigma": plan.sigma,
        "n": plan.grid.n,
        "p_cutoff": plan.grid.p_cutoff,
        "support_halfwidth_factor": plan.support_halfwidth_factor,
    }


def manifest_path(result_path: str) -> str:
    return result_path + ".manifest.json"


def write_results(
    rows,
    path: str,
    fmt: str,
    plan: SweepPlan,
    started_at: str,
    preset: str | None = None,
) -> None:
    """Write the result file atomically plus a run manifest alongside it."""
    if fmt == "csv":
        _atomic_write_bytes(path, rows_to_csv(rows).encode("utf-8"))
    elif fmt == "json":
        body = json.dumps([row_to_object(r) for r in rows], indent=2) + "\n"
        _atomic_write_bytes(path, body.encode("utf-8"))
    else:
        raise ConfigurationError(f"unknown output format {fmt!r}")
    manifest = {
        "plan": plan_to_object(plan),
        "preset": preset,
        "code_version": __version__,
        "started_at": started_at,
    }
    _atomic_write_bytes(
        manifest_path(path), (json.dumps(manifest, indent=2) + "\n").encode("utf-8")
    )


# ---------------------------------------------------------------------------
# Presets: one per plotted curve family and landscape.

@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    family: DefectKind
    conserved: bool
    strengths: tuple[float, ...]
    x0_window: tuple[float, float]
    x0_count: int = DEFAULT_X0_COUNT

    def plan(self, full: bool = False, grid: GridSpec | None = None) -> SweepPlan:
        if grid is None:
            grid = FULL_GRID if full else REDUCED_GRID
        x0s = tuple(float(x) for x in np.linspace(self.x0_window[0], self.x0_window[1], self.x0_count))
        return SweepPlan(
            defect_family=self.family,
            conserved=self.conserved,
            strengths=self.strengths,
            x0_values=x0s,
            sigma=0.1,
            grid=grid,
        )


def _symmetric(values) -> tuple[float, ...]:
    out = []
    for v in values:
        out.extend((-v, v))
    return tuple(sorted(out))


def _nonzero_linspace(lo: float, hi: float, count: int) -> tuple[float, ...]:
    return tuple(float(v) for v in np.linspace(lo, hi, count) if v != 0.0)


def _build_presets() -> dict[str, Preset]:
    presets: list[Preset] = [
        Preset(
            "free-reference",
            "interaction-free reference curve, beta vs x0 on [-1, 1]",
            DefectKind.FREE, False, (0.0,), (-1.0, 1.0),
        ),
        Preset(
            "delta-peak",
            "delta defect, lambda in {-0.6, -0.5, -0.4}: peak of max beta at -1/2",
            DefectKind.DELTA, False, (-0.6, -0.5, -0.4), (-2.0, 2.0),
        ),
        Preset(
            "landscape-delta",
            "delta landscape, lambda on [-10, 10] (40 values) x 81 positions",
            DefectKind.DELTA, False, _nonzero_linspace(-10.0, 10.0, 41), (-2.0, 2.0),
        ),
    ]
    for tag, mag in [("2a", 0.5), ("2b", 1.0), ("3a", 5.0), ("3b", 10.0)]:
        presets.append(Preset(
            f"delta-fig{tag}",
            f"delta defect, lambda = +/-{mag:g}, beta vs x0 on [-2, 2]",
            DefectKind.DELTA, False, _symmetric([mag]), (-2.0, 2.0),
        ))
    jump_figs = [("4a", 0.1), ("4b", 0.2), ("5a", 1.0), ("5b", 4.0),
                 ("6a", 9.0), ("6b", 10.0), ("7a", 20.0), ("7b", 50.0),
                 ("8a", 200.0), ("8b", 1000.0)]
    for tag, mag in jump_figs:
        for conserved in (False, True):
            suffix = "-conserved" if conserved else ""
            flavor = "conserved" if conserved else "non-conserved"
            presets.append(Preset(
                f"jump-fig{tag}{suffix}",
                f"jump defect, alpha = +/-{mag:g}, {flavor} current, beta vs x0 on [-1, 1]",
                DefectKind.JUMP, conserved, _symmetric([mag]), (-1.0, 1.0),
            ))
    for span, label in [((-50.0, 50.0), "wide"), ((-5.0, 5.0), "narrow")]:
        for conserved in (False, True):
            suffix = "-conserved" if conserved else ""
            flavor = "conserved" if conserved else "non-conserved"
            presets.append(Preset(
                f"landscape-jump-{label}{suffix}",
                f"jump landscape, {flavor} current, alpha on [{span[0]:g}, {span[1]:g}] "
                "(40 values) x 81 positions",
                DefectKind.JUMP, conserved, _nonzero_linspace(span[0], span[1], 41), (-1.0, 1.0),
            ))
    return {p.name: p for p in presets}


PRESETS: dict[str, Preset] = _build_presets()
