"""Command-line entry point: ``qtetra <group> <command> [options]``.

Every command builds a :class:`Report`; ``--json PATH`` writes it. Exit codes:
0 when every case passes, 1 on a verification failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from .report import Case, Report


class UsageError(Exception):
    pass


def _ints(text):
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _load_seed(ref):
    from .quiver import Seed, SeedError, builtin_quiver

    path = Path(ref)
    if path.suffix == ".json" or path.is_file():
        try:
            return Seed.from_json(json.loads(path.read_text()))
        except (OSError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot read seed file {ref}: {exc}") from exc
    try:
        return builtin_quiver(ref)
    except SeedError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# command handlers; each returns (Report, text to print)


def cmd_quiver_list(args):
    from .quiver import builtin_names, builtin_quiver

    data = {name: builtin_quiver(name).to_json() for name in builtin_names()}
    return Report("quiver-list", [Case("list", True, {}, None, sorted(data))]), json.dumps(data)


def cmd_quiver_mutate(args):
    from .quiver import SeedError, apply_vertex_permutation, builtin_names, builtin_quiver, mutate_seed

    seed = _load_seed(args.seed)
    try:
        out = mutate_seed(seed, args.at)
        if args.perm:
            out = apply_vertex_permutation(out, args.perm)
    except SeedError as exc:
        raise UsageError(str(exc)) from exc
    out = out.renamed(next((nm for nm in builtin_names() if builtin_quiver(nm) == out), ""))
    obj = {"schema": 1, **out.to_json()}
    return Report("quiver-mutate", [Case("mutate", True, {"seed": args.seed, "at": args.at}, None, obj)]), json.dumps(obj)


def cmd_tropical_signs(args):
    from .quiver import SeedError
    from .tropical import run_sequence

    seed = _load_seed(args.seed)
    try:
        traj, signs = run_sequence(seed, _ints(args.seq))
    except SeedError as exc:
        raise UsageError(str(exc)) from exc
    final = traj[-1]
    obj = {
        "schema": 1,
        "signs": signs,
        "finalC": [list(r) for r in final.C],
        "finalB2": [list(r) for r in final.seed.B2],
    }
    return Report("tropical-signs", [Case("signs", True, {"seed": args.seed, "seq": args.seq}, None, obj)]), json.dumps(obj)


IDENTITY_CASES = {
    "tetra": ("J123121", ([8, 4, 7, 8], "4:7,7:4"), ([7, 4, 8, 7], "4:8,8:4")),
    "refl": ("J123123123", ([10, 2, 6, 2, 7, 11, 3, 6, 3, 2, 10, 2, 11], None),
             ([11, 3, 7, 3, 2, 6, 2, 11, 10, 3, 6, 3, 7], None)),
}


def cmd_identity(args):
    from . import qtorus as qt
    from .quiver import builtin_quiver

    N = args.order
    name = args.which
    cases = []
    if name == "pentagon":
        seed = builtin_quiver("J121")
        lhs, rhs = qt.pentagon_sides(seed, qt.unit(2, 5), qt.unit(4, 5), N)
        diff = qt.first_difference(lhs, rhs)
        cases.append(Case("pentagon J121 (Y2, Y4)", diff is None, {"N": N}, None, diff))
    elif name == "ad-tau":
        for quiver, seq in (("J121", [4]), ("J1212", [2, 5, 2])):
            rows = []
            ok = qt.verify_ad_tau_decomposition(builtin_quiver(quiver), seq, N=N, report=rows)
            bad = next(((s, i) for s, i, same in rows if not same), None)
            cases.append(Case(f"ad-tau {quiver} {seq}", ok, {"N": N}, None,
                              None if bad is None else {"step": bad[0], "variable": bad[1]}))
        cases.append(Case("J1212 Y5 closed form", qt.j1212_closed_form_y5(N), {"N": N}))
    elif name.startswith("dilog"):
        quiver, (seq_l, _), (seq_r, _) = IDENTITY_CASES["tetra" if name == "dilog-r" else "refl"]
        seed = builtin_quiver(quiver)
        lhs = qt.dilog_product(seed, qt.dilog_factors(seed, seq_l), N)
        rhs = qt.dilog_product(seed, qt.dilog_factors(seed, seq_r), N)
        diff = qt.first_difference(lhs, rhs)
        cases.append(Case(f"dilogarithm identity {quiver}", diff is None, {"N": N}, None, diff))
    else:
        quiver, left, right = IDENTITY_CASES["tetra" if name == "tau-r" else "refl"]
        seed = builtin_quiver(quiver)
        ok = qt.verify_tau_identity(seed, (left[0], None, left[1]), (right[0], None, right[1]))
        cases.append(Case(f"tau identity {quiver}", ok))
    return Report(f"identity-{name}", cases), None


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def cmd_weyl_verify(args):
    from . import weylcalc as wc

    a, b, g = args.alpha, args.beta, args.gamma
    inp = {"alpha": a, "beta": b, "gamma": g}
    table = {
        "pi-tetra": lambda: [Case("pi tetrahedron", wc.verify_pi_tetrahedron(a), inp)],
        "p-tetra": lambda: [Case("P tetrahedron", wc.verify_P_tetrahedron(a), inp)],
        "pi-refl": lambda: [Case("pi reflection", wc.verify_pi_reflection(a, b, g), inp)],
        "p-refl": lambda: [Case("P reflection", wc.verify_P_reflection(a, b, g), inp),
                           Case("P matches pi", wc.verify_P_matches_pi(a, b, g), inp)],
        "diagrams": lambda: [Case(f"diagram {c}", wc.verify_diagram(c)) for c in "RK"]
        + [Case(f"phi commutation {nm}", wc.check_phi_commutation(nm)) for nm in wc._PHI_TABLE],
        "chains": lambda: [Case(f"conjugation chain {case} {side}", wc.verify_full_conjugation_chain(side, case))
                           for case in ("tetra", "reflection") for side in "LR"],
    }
    return Report(f"weyl-{args.which}", table[args.which]()), None


def cmd_rep_element(args):
    from .qweylrep import IndeterminateElement, elem, k_indeterminate

    out, inp = _ints(args.out), _ints(args.inp)
    size = 3 if args.op == "r" else 4
    if len(out) != size or len(inp) != size:
        raise UsageError(f"{args.op.upper()} acts on {size} legs")
    n = _ints(args.n) if args.n else None
    if n is not None and (args.op != "r" or len(n) != 3):
        raise UsageError("--n takes three integers and applies to R only")
    try:
        value = elem(args.op, args.basis, out, inp, n)
        got = str(value)
    except IndeterminateElement:
        got = "indeterminate (0 * infinity in the closed form)"
    inputs = {"op": args.op, "basis": args.basis, "out": out, "in": inp, "n": n}
    if args.op == "k" and k_indeterminate(args.basis, out, inp):
        got += " [closed form indeterminate here; value from the series]"
    return Report("rep-element", [Case("element", True, inputs, None, got)]), got


def _sweep_case(name, rep, inputs):
    return Case(name, rep.ok, inputs, "pass",
                {"pairs": rep.pairs, "nonzero": rep.nonzero,
                 "counterexample": rep.failures[0] if rep.failures else None})


def cmd_verify_tetra(args):
    from itertools import product

    from .qweylrep import tetra_sweep

    r = args.n_range
    ns = list(product(range(-r, r + 1), repeat=6))
    if args.samples and args.samples < len(ns):
        ns = random.Random(args.seed).sample(ns, args.samples)
    cases = []
    for basis in args.basis:
        for n in ns:
            rep = tetra_sweep(basis, n, args.window, args.jobs)
            cases.append(_sweep_case(f"tetrahedron {basis}-basis n={n}", rep, {"window": args.window}))
    return Report("verify-tetra-rep", cases), None


def cmd_verify_refl(args):
    from .qweylrep import reflection_sweep

    rep = reflection_sweep("u", args.window, args.jobs)
    return Report("verify-refl-rep", [_sweep_case("reflection u-basis", rep, {"window": args.window})]), None


def cmd_verify_all(args):
    from .acceptance import run_all

    keys = set(args.only.split(",")) if args.only else None
    echo = (lambda line: print(line, flush=True)) if not args.quiet else None
    return run_all(args.level, args.jobs, keys, echo), None


def _complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def cmd_ncqd_eval(args):
    from .ncqd import ModularParams, phi

    P = ModularParams(args.b)
    value = complex(phi(args.z, P))
    got = {"re": value.real, "im": value.imag}
    return Report("ncqd-eval", [Case("phi", True, {"z": args.z, "b": args.b}, None, got)]), f"{value.real:.15g} {value.imag:+.15g}j"


def cmd_ncqd_check(args):
    from .acceptance import NCQD_TOL
    from .ncqd import ModularParams, check_identity

    tol = args.tol if args.tol is not None else NCQD_TOL[args.identity]
    r = float(check_identity(args.identity, ModularParams(args.b)))
    case = Case(f"{args.identity} residual", r < tol, {"b": args.b, "tol": tol}, f"< {tol}", r)
    return Report(f"ncqd-{args.identity}", [case]), None


# ---------------------------------------------------------------------------
# parser


def build_parser():
    from .ncqd import IDENTITIES

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", default=argparse.SUPPRESS, help="write the report as JSON")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes for sweeps")

    p = argparse.ArgumentParser(prog="qtetra", parents=[common],
                                description="Exact and numeric checks of quantum-dilogarithm identities.")
    groups = p.add_subparsers(dest="group", required=True)

    def leaf(sub, name, func, **kw):
        q = sub.add_parser(name, parents=[common], **kw)
        q.set_defaults(func=func)
        return q

    g = groups.add_parser("quiver").add_subparsers(dest="cmd", required=True)
    leaf(g, "list", cmd_quiver_list, help="print all built-in quivers")
    q = leaf(g, "mutate", cmd_quiver_mutate, help="mutate a seed and print it as JSON")
    q.add_argument("--seed", required=True, help="built-in name or JSON file")
    q.add_argument("--at", type=int, required=True)
    q.add_argument("--perm", help='vertex relabelling such as "4:7,7:4"')

    g = groups.add_parser("tropical").add_subparsers(dest="cmd", required=True)
    q = leaf(g, "signs", cmd_tropical_signs, help="tropical sign sequence and final c-vectors")
    q.add_argument("--seed", required=True)
    q.add_argument("--seq", required=True, help='mutation sequence, first entry first: "2,5,2"')

    q = leaf(groups, "identity", cmd_identity, help="truncated quantum torus identities")
    q.add_argument("which", choices=["pentagon", "ad-tau", "dilog-r", "dilog-k", "tau-r", "tau-k"])
    q.add_argument("--order", type=int, default=6, help="truncation degree N")

    g = groups.add_parser("weyl").add_subparsers(dest="cmd", required=True)
    q = leaf(g, "verify", cmd_weyl_verify, help="symbolic Weyl-algebra identities")
    q.add_argument("which", choices=["pi-tetra", "pi-refl", "p-tetra", "p-refl", "diagrams", "chains"])
    for name in ("alpha", "beta", "gamma"):
        q.add_argument(f"--{name}", type=_fraction, default=Fraction(0))

    g = groups.add_parser("rep").add_subparsers(dest="cmd", required=True)
    q = leaf(g, "element", cmd_rep_element, help="one matrix element of R or K")
    q.add_argument("--op", choices=["r", "k"], required=True)
    q.add_argument("--basis", choices=["u", "p"], default="u")
    q.add_argument("--in", dest="inp", required=True, help="input state, comma separated")
    q.add_argument("--out", required=True, help="output state, comma separated")
    q.add_argument("--n", help="integer spectral parameters for R, comma separated")

    g = groups.add_parser("verify").add_subparsers(dest="cmd", required=True)
    q = leaf(g, "tetra-rep", cmd_verify_tetra, help="tetrahedron equation on a window")
    q.add_argument("--window", type=int, default=1)
    q.add_argument("--n-range", type=int, default=0)
    q.add_argument("--samples", type=int, default=0, help="random subset of spectral vectors (0 = all)")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--basis", choices=["u", "p", "up"], default="u")
    q = leaf(g, "refl-rep", cmd_verify_refl, help="reflection equation on a window (u-basis)")
    q.add_argument("--window", type=int, default=1)
    q = leaf(g, "all", cmd_verify_all, help="the acceptance suite")
    q.add_argument("--level", choices=["smoke", "desk"], default="desk")
    q.add_argument("--only", help='comma separated criterion keys, e.g. "1,2,F"')
    q.add_argument("--quiet", action="store_true")

    g = groups.add_parser("ncqd").add_subparsers(dest="cmd", required=True)
    q = leaf(g, "eval", cmd_ncqd_eval, help="noncompact quantum dilogarithm phi(z)")
    q.add_argument("--z", type=_complex, required=True)
    q.add_argument("--b", type=_complex, default=complex(0.7))
    q = leaf(g, "check", cmd_ncqd_check, help="residual of a functional or integral identity")
    q.add_argument("--identity", choices=list(IDENTITIES), required=True)
    q.add_argument("--b", type=_complex, default=complex(0.7))
    q.add_argument("--tol", type=float)
    return p


def run(argv=None):
    """Parse and dispatch; returns (exit code, Report or None)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), None
    args.jobs = max(1, getattr(args, "jobs", 1))
    json_path = getattr(args, "json", None)
    t = time.perf_counter()
    try:
        report, text = args.func(args)
    except UsageError as exc:
        print(f"qtetra: error: {exc}", file=sys.stderr)
        return 2, None
    if not report.wall_time:
        report.wall_time = round(time.perf_counter() - t, 3)
    if text is not None:
        print(text)
    elif args.func is not cmd_verify_all or getattr(args, "quiet", False):
        for c in report.cases:
            extra = "" if c.passed else f"  got={json.dumps(c.got)}"
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}{extra}")
    totals = report.totals
    if text is None:
        print(f"{totals['passed']}/{totals['cases']} passed in {report.wall_time:.2f} s")
    if json_path:
        Path(json_path).write_text(report.to_json())
    return report.exit_code(), report


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
