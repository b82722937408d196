"""Exhaustive two-translate sweeps over every finite group the sweep supports.

Usage: python scripts/run_sweeps.py [--weak] [--jobs N]
"""

import argparse
import json
import time

from swelling.finsets import sweep_group_2swelling, sweep_group_weak_2swelling
from swelling.groups import group_from_spec

GROUPS = ["Zmod:2", "Zmod:3", "Zmod:4", "Zmod:5", "Zmod:6", "S3"]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--weak", action="store_true", help="sweep the weak variant instead")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()
    sweep = sweep_group_weak_2swelling if args.weak else sweep_group_2swelling
    rows = []
    for spec in GROUPS:
        t = time.perf_counter()
        s = sweep(group_from_spec(spec), jobs=args.jobs)
        row = s.to_json() | {"seconds": round(time.perf_counter() - t, 3)}
        rows.append(row)
        print(f"{spec:8} tuples={s.tuples_checked:>8} inclusions={s.inclusion_tuples:>6} "
              f"violations={len(s.violations)} chain_failures={s.chain_failures}")
    with open("sweeps.json", "w") as fh:
        json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
