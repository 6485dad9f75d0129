"""Command-line interface.

Subcommands: `beta` (single-point evaluation), `scan` (sweeps and
landscapes, preset or custom), `validate` (module invariant suites at
reduced scale) and `conservation` (randomized defect conservation checks).

Exit codes: 0 success, 1 validation/conservation failure, 2 configuration
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__, conservation, scan, validation
from .core import (
    ConfigurationError,
    DefectKind,
    DefectSpec,
    GaussianTest,
    GridSpec,
    NumericalError,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("BACKFLOW_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigurationError(f"BACKFLOW_THREADS must be an integer, got {env!r}")
    return os.cpu_count() or 1


def _defect_from_args(args) -> DefectSpec:
    kind = DefectKind(args.defect)
    conserved = getattr(args, "conserved", False)
    if kind is DefectKind.FREE:
        if args.strength is not None and args.strength != 0.0:
            raise ConfigurationError("--defect free takes no --strength")
        if conserved:
            raise ConfigurationError("--conserved only applies to --defect jump")
        return DefectSpec.free()
    if args.strength is None:
        raise ConfigurationError(f"--defect {kind.value} requires --strength")
    if args.strength == 0.0:
        raise ConfigurationError(
            "strength 0 is the interaction-free case; use --defect free"
        )
    if kind is DefectKind.DELTA:
        if conserved:
            raise ConfigurationError("--conserved only applies to --defect jump")
        return DefectSpec.delta(args.strength)
    return DefectSpec.jump(args.strength, conserved)


def _add_defect_flags(parser, include_conserved=True):
    parser.add_argument("--defect", required=True, choices=[k.value for k in DefectKind])
    parser.add_argument("--strength", type=float, default=None,
                        help="lambda for delta, alpha for jump")
    if include_conserved:
        parser.add_argument("--conserved", action="store_true",
                            help="add the probability-current fixing term (jump only)")


def _add_test_and_grid_flags(parser):
    parser.add_argument("--x0", type=float, default=0.0, help="measurement center")
    parser.add_argument("--sigma", type=float, default=0.1, help="detector width")
    parser.add_argument("--support-factor", type=float, default=8.0,
                        help="test-function support half-width in units of sigma")
    parser.add_argument("--n", type=int, default=2000, help="momentum cells")
    parser.add_argument("--pcut", type=float, default=200.0, help="momentum cutoff")


def _preset_epilog() -> str:
    lines = ["presets:"]
    for preset in scan.PRESETS.values():
        lines.append(f"  {preset.name:32s} {preset.description}")
    lines.append("")
    lines.append("Preset grids default to n=500, p_cutoff=100; --full selects the")
    lines.append("reference resolution n=2000, p_cutoff=200. --n/--pcut override both.")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="backflow",
        description="Lowest eigenvalue of the spatially averaged probability "
                    "current for point-defect scattering (hbar = m = 1).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_beta = sub.add_parser("beta", help="evaluate beta at a single configuration")
    _add_defect_flags(p_beta)
    _add_test_and_grid_flags(p_beta)
    p_beta.add_argument("--threads", type=int, default=None)

    p_scan = sub.add_parser(
        "scan", help="run a sweep and write CSV/JSON results",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=_preset_epilog(),
    )
    p_scan.add_argument("--preset", default=None, help="named sweep (see list below)")
    p_scan.add_argument("--defect", choices=[k.value for k in DefectKind], default=None)
    p_scan.add_argument("--strengths", default=None,
                        help="comma-separated strengths for a custom sweep")
    p_scan.add_argument("--conserved", action="store_true")
    p_scan.add_argument("--x0-count", type=int, default=scan.DEFAULT_X0_COUNT)
    p_scan.add_argument("--sigma", type=float, default=0.1)
    p_scan.add_argument("--full", action="store_true",
                        help="reference resolution for presets (n=2000, p=200)")
    p_scan.add_argument("--n", type=int, default=None)
    p_scan.add_argument("--pcut", type=float, default=None)
    p_scan.add_argument("--out", required=True, help="output file path")
    p_scan.add_argument("--format", choices=("csv", "json"), default="csv")
    p_scan.add_argument("--threads", type=int, default=None)

    p_val = sub.add_parser("validate", help="run the module invariant suites")
    p_val.add_argument("--suite", action="append", default=None,
                       help="run only the named suite (repeatable)")
    p_val.add_argument("--inject-fault", choices=validation.KNOWN_FAULTS,
                       default=None, help=argparse.SUPPRESS)

    p_cons = sub.add_parser("conservation", help="randomized conservation-law checks")
    _add_defect_flags(p_cons, include_conserved=False)
    p_cons.add_argument("--seed", type=int, default=0)
    p_cons.add_argument("--trials", type=int, default=100)
    p_cons.add_argument("--sigma", type=float, default=0.1)
    p_cons.add_argument("--x0", type=float, default=0.0)

    return parser


def cmd_beta(args) -> int:
    defect = _defect_from_args(args)
    plan = scan.SweepPlan(
        defect_family=defect.kind,
        conserved=defect.conserved,
        strengths=(defect.strength,) if defect.strength is not None else (0.0,),
        x0_values=(args.x0,),
        sigma=args.sigma,
        grid=GridSpec(args.n, args.pcut),
        support_halfwidth_factor=args.support_factor,
    )
    row = scan.compute_point(plan, plan.strengths[0], args.x0)
    print(scan.CSV_HEADER)
    print(scan.row_to_csv(row))
    if row.error is not None:
        print(f"error: {row.error}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _plan_from_scan_args(args) -> tuple[scan.SweepPlan, str | None]:
    override = None
    if args.n is not None or args.pcut is not None:
        if args.n is None or args.pcut is None:
            raise ConfigurationError("--n and --pcut must be given together")
        override = GridSpec(args.n, args.pcut)
    if args.preset is not None:
        preset = scan.PRESETS.get(args.preset)
        if preset is None:
            names = ", ".join(scan.PRESETS)
            raise ConfigurationError(f"unknown preset {args.preset!r}; available: {names}")
        return preset.plan(full=args.full, grid=override), preset.name
    if args.defect is None:
        raise ConfigurationError("scan needs either --preset or --defect with --strengths")
    family = DefectKind(args.defect)
    if family is DefectKind.FREE:
        strengths = (0.0,)
    else:
        if not args.strengths or not args.strengths.strip():
            raise ConfigurationError("custom sweeps need a nonempty --strengths list")
        strengths = tuple(float(tok) for tok in args.strengths.split(","))
    grid = override if override is not None else scan.FULL_GRID if args.full else scan.REDUCED_GRID
    plan = scan.SweepPlan(
        defect_family=family,
        conserved=args.conserved,
        strengths=strengths,
        x0_values=scan.default_x0_values(family, args.x0_count),
        sigma=args.sigma,
        grid=grid,
    )
    return plan, None


def cmd_scan(args) -> int:
    plan, preset = _plan_from_scan_args(args)
    started = datetime.now(timezone.utc).isoformat()
    rows = scan.run_sweep(plan, workers=_threads(args))
    scan.write_results(rows, args.out, args.format, plan, started, preset=preset)
    failures = [r for r in rows if r.error is not None]
    print(f"{len(rows)} rows -> {args.out}" + (f" ({len(failures)} failed points)" if failures else ""))
    if failures:
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_validate(args) -> int:
    results = validation.run_suites(args.suite, fault=args.inject_fault)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:14s} {r.detail}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    return EXIT_OK if not failed else EXIT_FAILED


def _random_states(defect: DefectSpec, trials: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        nm = int(rng.integers(2, 4))
        ks = np.sort(rng.uniform(0.1, 8.0, nm))
        amps = rng.normal(size=nm) + 1j * rng.normal(size=nm)
        amps /= np.linalg.norm(amps)  # unit-weight states keep the rates O(k^3)
        t = float(rng.uniform(0.0, 2.0))
        yield conservation.ModeSuperposition(
            tuple((float(k), complex(a)) for k, a in zip(ks, amps)), defect
        ), t


def cmd_conservation(args) -> int:
    defect = _defect_from_args(args)
    if defect.kind is DefectKind.FREE:
        raise ConfigurationError("conservation checks need --defect delta or jump")
    tol = 1e-12
    ok = True
    if defect.kind is DefectKind.JUMP:
        worst = {q: 0.0 for q in conservation.Quantity}
        for state, t in _random_states(defect, args.trials, args.seed):
            for q in conservation.Quantity:
                worst[q] = max(worst[q], abs(conservation.boundary_rates(state, q, t).residual))
        for q, w in worst.items():
            line_ok = w <= tol
            ok &= line_ok
            print(f"{'PASS' if line_ok else 'FAIL'}  jump {q.value:12s} worst residual {w:.3e}")
        dev = conservation.fixing_term_consistency(
            defect.strength, GaussianTest(args.x0, args.sigma), GridSpec(32, 16.0),
            seed=args.seed,
        )
        line_ok = dev <= 1e-10
        ok &= line_ok
        print(f"{'PASS' if line_ok else 'FAIL'}  jump fixing-term quadratic form {dev:.3e}")
    else:
        worst_e = worst_n = worst_p = 0.0
        for state, t in _random_states(defect, args.trials, args.seed):
            worst_e = max(worst_e, abs(conservation.boundary_rates(
                state, conservation.Quantity.ENERGY, t).residual))
            worst_n = max(worst_n, abs(conservation.boundary_rates(
                state, conservation.Quantity.PROBABILITY, t).residual))
            flux, closed = conservation.delta_momentum_residual(state, defect.strength, t)
            worst_p = max(worst_p, abs(flux - closed))
        for label, w, lim in (("energy (corrected)", worst_e, tol),
                              ("probability", worst_n, 1e-13),
                              ("momentum flux vs closed form", worst_p, tol)):
            line_ok = w <= lim
            ok &= line_ok
            print(f"{'PASS' if line_ok else 'FAIL'}  delta {label}: {w:.3e}")
        print("note: delta momentum is non-conserved; the residual matches the "
              "defect-located closed form above")
    return EXIT_OK if ok else EXIT_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "beta": cmd_beta,
        "scan": cmd_scan,
        "validate": cmd_validate,
        "conservation": cmd_conservation,
    }
    try:
        return handlers[args.command](args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
