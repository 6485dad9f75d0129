#!/usr/bin/env python3
"""Run every curve and landscape preset and collect the CSVs in one
directory.  Reduced resolution by default (n=500, p_cutoff=100); pass
--full for the reference resolution used for the published-quality runs
(slow: hours for the landscapes on a small machine)."""
import argparse
import os
import time
from datetime import datetime, timezone

from backflow.scan import PRESETS, run_sweep, write_results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="out")
    parser.add_argument("--full", action="store_true")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--only", default=None,
                        help="comma-separated preset names (default: all curve presets)")
    args = parser.parse_args()

    if args.only:
        names = [n.strip() for n in args.only.split(",")]
    else:
        names = [n for n in PRESETS if not n.startswith("landscape")]

    os.makedirs(args.outdir, exist_ok=True)
    for name in names:
        preset = PRESETS[name]
        plan = preset.plan(full=args.full)
        started = datetime.now(timezone.utc).isoformat()
        t0 = time.perf_counter()
        rows = run_sweep(plan, workers=args.threads)
        path = os.path.join(args.outdir, f"{name}.csv")
        write_results(rows, path, "csv", plan, started, preset=name)
        bad = sum(1 for r in rows if r.error is not None)
        print(f"{name:34s} {len(rows):4d} rows  {time.perf_counter() - t0:7.1f}s"
              + (f"  ({bad} failed)" if bad else ""))


if __name__ == "__main__":
    main()
