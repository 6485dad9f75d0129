"""Strict reader for the sweep CSV schema.

The expected header is exactly

    defect,strength,conserved,x0,sigma,n,p_cutoff,beta,residual,wall_s

and a mismatch reports the first offending column by name and position.
"""
from __future__ import annotations

from dataclasses import dataclass

EXPECTED_COLUMNS = (
    "defect", "strength", "conserved", "x0", "sigma",
    "n", "p_cutoff", "beta", "residual", "wall_s",
)


class SchemaError(ValueError):
    """Input file does not match the sweep CSV schema."""


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


@dataclass(frozen=True)
class SweepTable:
    path: str
    rows: tuple[SweepRow, ...]


def _check_header(path: str, header: str) -> None:
    got = header.rstrip("\n").split(",")
    for position, expected in enumerate(EXPECTED_COLUMNS):
        if position >= len(got):
            raise SchemaError(f"{path}: missing column {expected!r} (position {position})")
        if got[position] != expected:
            raise SchemaError(
                f"{path}: column {position} is {got[position]!r}, expected {expected!r}"
            )
    if len(got) > len(EXPECTED_COLUMNS):
        raise SchemaError(f"{path}: unexpected extra column {got[len(EXPECTED_COLUMNS)]!r}")


def _parse_bool(path: str, line_no: int, token: str) -> bool:
    if token == "true":
        return True
    if token == "false":
        return False
    raise SchemaError(f"{path}:{line_no}: column 'conserved' must be true/false, got {token!r}")


def _parse_row(path: str, line_no: int, line: str) -> SweepRow:
    parts = line.split(",")
    if len(parts) != len(EXPECTED_COLUMNS):
        raise SchemaError(
            f"{path}:{line_no}: expected {len(EXPECTED_COLUMNS)} fields, got {len(parts)}"
        )
    try:
        return SweepRow(
            defect=parts[0],
            strength=float(parts[1]),
            conserved=_parse_bool(path, line_no, parts[2]),
            x0=float(parts[3]),
            sigma=float(parts[4]),
            n=int(parts[5]),
            p_cutoff=float(parts[6]),
            beta=float(parts[7]),
            residual=float(parts[8]),
            wall_s=float(parts[9]),
        )
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(f"{path}:{line_no}: {exc}") from exc


def read_table(path: str) -> SweepTable:
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    if not lines:
        raise SchemaError(f"{path}: empty file")
    _check_header(path, lines[0])
    rows = tuple(
        _parse_row(path, line_no, line)
        for line_no, line in enumerate(lines[1:], start=2)
        if line.strip()
    )
    return SweepTable(path=path, rows=rows)


def read_tables(paths) -> list[SweepTable]:
    return [read_table(p) for p in paths]
