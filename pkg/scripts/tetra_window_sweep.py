"""Cost and coverage of the tetrahedron check as the window grows.

For each window radius, checks both sides at zero spectral parameters and
reports the number of consistent pairs, nonzero entries and wall time.
"""

import argparse
import time

from qtetra.qweylrep import tetra_sweep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--radii", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--basis", choices=["u", "p"], default="u")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    print("radius  pairs  nonzero  failures  seconds")
    for r in args.radii:
        t = time.perf_counter()
        rep = tetra_sweep(args.basis, (0,) * 6, r, args.jobs)
        dt = time.perf_counter() - t
        print(f"{r:>6}  {rep.pairs:>5}  {rep.nonzero:>7}  {len(rep.failures):>8}  {dt:7.1f}")


if __name__ == "__main__":
    main()
