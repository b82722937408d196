"""Run the counterexample search from a config file and print a short digest.

Usage: python scripts/desk_search.py [configs/desk.cfg] [--out report.json]
Worker count comes from SWELLING_JOBS.
"""

import argparse
import json

from swelling.search import load_config, run_search


def main() -> None:
    parser = argparse.ArgumentParser(description="desk-scale search")
    parser.add_argument("config", nargs="?", default="configs/desk.cfg")
    parser.add_argument("--out", default="search_report.json")
    args = parser.parse_args()
    report = run_search(load_config(args.config))
    with open(args.out, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
    print(f"grid size        {report['grid_size']}")
    print(f"generated        {report['candidates_generated']}")
    print(f"filtered out     {report['filtered_out']}")
    print(f"fully verified   {report['fully_verified']}")
    print(f"counterexamples  {len(report['counterexamples'])}")
    for miss in report["near_misses"][:5]:
        print(f"  near miss score={miss['score']}")
    print(report["conclusion"])


if __name__ == "__main__":
    main()
