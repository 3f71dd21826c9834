"""Run the acceptance criteria and write a JSON report.

    python3 scripts/run_acceptance.py --level desk --out acceptance.json
"""

import argparse
import sys

from qtetra.acceptance import LEVELS, run_all


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--level", choices=LEVELS, default="desk")
    ap.add_argument("--only", help="comma separated criterion keys")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="acceptance.json")
    args = ap.parse_args()
    keys = set(args.only.split(",")) if args.only else None
    rep = run_all(args.level, args.jobs, keys, echo=lambda s: print(s, flush=True))
    with open(args.out, "w") as fh:
        fh.write(rep.to_json())
    print(f"{rep.totals['passed']}/{rep.totals['cases']} cases, {rep.wall_time:.1f} s -> {args.out}")
    return rep.exit_code()


if __name__ == "__main__":
    sys.exit(main())
