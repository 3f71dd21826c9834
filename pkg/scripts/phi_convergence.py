"""How the trapezoid step and the value of b affect phi and the identity residuals.

Prints a table of |phi_h(z) - phi_ref(z)| for a few steps h, then the
residual of each functional equation across a range of b.
"""

import argparse

import numpy as np

from qtetra.ncqd import Contour, ModularParams, check_identity, phi


def step_table(b, zs):
    P = ModularParams(b)
    ref = phi(zs, P, Contour(h=0.005))
    print(f"b = {b}: error against h = 0.005")
    for h in (0.08, 0.04, 0.02, 0.01):
        err = np.max(np.abs(phi(zs, P, Contour(h=h)) - ref))
        print(f"  h = {h:<5}  max error {err:.2e}")


def residual_table(bs, names):
    print("b      " + "  ".join(f"{n:>14}" for n in names))
    for b in bs:
        P = ModularParams(b)
        row = [check_identity(n, P) for n in names]
        print(f"{b:<6} " + "  ".join(f"{r:14.2e}" for r in row))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--b", type=float, nargs="+", default=[0.5, 0.7, 0.9, 1.0])
    ap.add_argument("--full", action="store_true", help="include the integral identities (slow)")
    args = ap.parse_args()
    zs = np.array([-1.2 + 0.1j, 0.0, 0.4 - 0.3j, 1.5 + 0.2j, 0.3 + 1.4j])
    step_table(args.b[0], zs)
    names = ["inversion", "recursion_b", "recursion_binv"]
    if args.full:
        names += ["ram1", "ram2", "ramanujan_full", "heine"]
    residual_table(args.b, names)


if __name__ == "__main__":
    main()
