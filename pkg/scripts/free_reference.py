#!/usr/bin/env python3
"""Compute the interaction-free backflow constant at the reference
resolution and print a small convergence table around it."""
import argparse
import time

from backflow.core import DefectSpec, GaussianTest, GridSpec
from backflow.scan import convergence_study
from backflow.spectral import build_matrix, lowest_eigenpair


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--x0", type=float, default=0.0)
    parser.add_argument("--sigma", type=float, default=0.1)
    args = parser.parse_args()

    test = GaussianTest(args.x0, args.sigma)
    start = time.perf_counter()
    result = lowest_eigenpair(build_matrix(DefectSpec.free(), test, GridSpec(2000, 200.0)))
    elapsed = time.perf_counter() - start
    print(f"beta_0 = {result.beta:.6f}   (residual {result.residual_norm:.2e}, {elapsed:.1f}s)")

    print("\nconvergence:")
    table = convergence_study(
        DefectSpec.free(), test, n_values=(500, 1000, 2000), p_values=(100.0, 200.0)
    )
    for (n, p), beta in sorted(table.items()):
        print(f"  n={n:5d}  p_cutoff={p:6.1f}  beta={beta:.6f}")


if __name__ == "__main__":
    main()
