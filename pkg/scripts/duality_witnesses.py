"""Search random (a, c) states of the tetrahedron check whose two sides are
proportional to the two sides of the q-binomial duality.

Prints each hit with its (r, s, t) and the common ratio, which should be a
signed power of q.
"""

import argparse
import random

from qtetra.qweylrep import duality_match, duality_parameters, is_signed_monomial


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=5)
    ap.add_argument("--tries", type=int, default=40000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    seen = set()
    for _ in range(args.tries):
        a = tuple(rng.choice((-1, 0, 1)) for _ in range(6))
        c = tuple(rng.choice((-1, 0, 1)) for _ in range(6))
        if duality_parameters(a, c) in seen:
            continue
        left, right, rst = duality_match(a, c)
        if left is None or not left:
            continue
        seen.add(rst)
        ok = left == right and is_signed_monomial(left)
        print(f"a={a} c={c} rst={rst} ratio={left} {'ok' if ok else 'MISMATCH'}", flush=True)
        if len(seen) >= args.count:
            break


if __name__ == "__main__":
    main()
