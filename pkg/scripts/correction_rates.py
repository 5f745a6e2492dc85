#!/usr/bin/env python3
"""Measure repair rates per error class over seeded random trials.

The interesting contrasts: every class except row errors is repaired from
the determinant check alone, and row errors flip from hopeless to routine
once the rounded column ratio is transmitted.

Usage: python scripts/correction_rates.py --trials 500 --seed 1
"""

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from unicipher.channel import CorruptionSpec, corrupt_package
from unicipher.cipher import encrypt
from unicipher.correction import correct
from unicipher.sampling import random_cipher_key, random_plaintext

CLASSES = ("single", "diagonal", "antidiagonal", "column_left", "column_right",
           "row_top", "row_bottom")


def run_trials(mode, trials, seed, with_ratio, digits, n_lo, n_hi, bound):
    rng = random.Random(seed)
    exact = wrong = reported = 0
    for _ in range(trials):
        key = random_cipher_key(rng, n_lo=n_lo, n_hi=n_hi)
        p = random_plaintext(rng)
        pkg = encrypt(p, key, emit_column_ratio=with_ratio, ratio_digits=digits)
        bad, _ = corrupt_package(pkg, CorruptionSpec(mode, seed=rng.randrange(2**30)))
        report = correct(bad, key, plaintext_bound=bound)
        if report.success:
            if report.repaired == pkg.c:
                exact += 1
            else:
                wrong += 1
        else:
            reported += 1
    return exact, wrong, reported


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=500)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--ratio-digits", type=int, default=2)
    parser.add_argument("--n-lo", type=int, default=4)
    parser.add_argument("--n-hi", type=int, default=24)
    parser.add_argument("--bound", type=int, default=26,
                        help="alphabet size used for candidate filtering")
    args = parser.parse_args()

    print(f"{args.trials} trials per class, exponents {args.n_lo}..{args.n_hi}, "
          f"ratio digits {args.ratio_digits}")
    for with_ratio in (True, False):
        label = "with transmitted ratio" if with_ratio else "determinant check only"
        print(f"\n--- {label} ---")
        print(f"{'class':14s} {'exact':>7s} {'wrong':>7s} {'reported':>9s} {'rate':>8s}")
        for mode in CLASSES:
            exact, wrong, reported = run_trials(
                mode, args.trials, args.seed, with_ratio,
                args.ratio_digits, args.n_lo, args.n_hi, args.bound,
            )
            rate = exact / args.trials
            print(f"{mode:14s} {exact:>7d} {wrong:>7d} {reported:>9d} {rate:>8.1%}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
