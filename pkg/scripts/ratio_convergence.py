#!/usr/bin/env python3
"""Tabulate ratio-orbit convergence and the measured geometric decay rate.

For each (t, d) pair the orbit a(n+1) = t - d/a(n) is run exactly; the
error column is the distance to the larger fixed point and the final column
the worst per-step error ratio after the first step (< 1 means geometric).

Usage: python scripts/ratio_convergence.py --steps 32
"""

import argparse
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from unicipher.ratios import (
    RatioParams,
    convergence_profile,
    exponential_rate,
    fixed_points,
)

SAMPLES = (
    (1, -1, Fraction(3)),       # Fibonacci ratios from above
    (1, -1, Fraction(1, 2)),    # Fibonacci ratios from below
    (3, 1, Fraction(10)),       # cat-matrix ratios, decreasing
    (3, 1, Fraction(1)),        # cat-matrix ratios, increasing
    (5, 1, Fraction(7, 2)),
    (4, -1, Fraction(2)),
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=32)
    parser.add_argument("--show-orbit", action="store_true")
    args = parser.parse_args()

    print(f"{'t':>3} {'d':>3} {'a0':>8} {'mode':24} {'fixed point':>16} "
          f"{'final error':>12} {'rate':>8}")
    for t, d, a0 in SAMPLES:
        profile = convergence_profile(RatioParams(t, d, a0), args.steps)
        fp = fixed_points(t, d)
        rate = exponential_rate(profile.errors[1:])
        print(f"{t:>3} {d:>3} {str(a0):>8} {profile.mode.value:24} "
              f"{fp.phi_plus_decimal(12):>16} {profile.errors[-1]:>12.3e} {rate:>8.4f}")
        if args.show_orbit:
            for i, (a, e) in enumerate(zip(profile.orbit, profile.errors)):
                print(f"    {i:>3}  {float(a):>18.14f}  {e:>10.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
