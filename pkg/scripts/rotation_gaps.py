"""Circular gap statistics of the projected orbit for an irrational rotation.

Keeps every point inside one huge interval so the orbit only takes a-steps,
which makes the projection mod |b| a pure rotation by a/b.

Usage: python scripts/rotation_gaps.py [--a 0+1*sqrt2] [--b 1] [--max-power 14]
"""

import argparse

from swelling.intervals import interval_set
from swelling.numeric import parse_scalar
from swelling.orbit import projected_gap_stats, run_orbit


def main() -> None:
    parser = argparse.ArgumentParser(description="rotation gap table")
    parser.add_argument("--a", default="0+1*sqrt2")
    parser.add_argument("--b", default="1")
    parser.add_argument("--max-power", type=int, default=14)
    args = parser.parse_args()
    a, b = parse_scalar(args.a), parse_scalar(args.b)
    top = 2**args.max_power
    span = int(abs(float(a)) * top) + 10
    big = interval_set((-span, span))
    trace = run_orbit(big, big, a, b, 0, top)
    print(f"{'N':>7} {'lengths':>7} {'max gap':>12} {'min gap':>12} {'N*max':>8}")
    for k in range(1, args.max_power + 1):
        g = projected_gap_stats(trace, upto=2**k - 1)
        print(f"{2**k:>7} {len(g.gap_lengths):>7} {float(g.max_gap):>12.3e} "
              f"{float(g.min_gap):>12.3e} {2**k * float(g.max_gap):>8.3f}")


if __name__ == "__main__":
    main()
