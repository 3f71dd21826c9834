"""The acceptance suite: nine exact/numeric criteria plus the kernel Fourier check.

Each ``criterion_*`` function returns a list of :class:`Case`. ``level="desk"``
runs the full sizes; ``level="smoke"`` shrinks every sweep so the whole suite
finishes in well under a minute.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .report import Case, Report

LEVELS = ("smoke", "desk")


def _timed(name, fn, inputs=None, expected=True):
    t = time.perf_counter()
    got = fn()
    if isinstance(got, Case):
        ok, expected, got = got.passed, "pass", got.got
    else:
        ok = got == expected
    return Case(name, ok, inputs or {}, expected, got, round(time.perf_counter() - t, 3))


def _mat(rows):
    return [[Fraction(x) for x in r] for r in rows]


J1212_B = _mat([
    [0, 1, 0, 1, -2, 0],
    [-1, 0, 1, 0, 2, -2],
    [0, -1, 0, 0, 0, 1],
    ["-1/2", 0, 0, 0, 1, 0],
    [1, -1, 0, -1, 0, 1],
    [0, 1, "-1/2", 0, -1, 0],
])
J1212_BHAT = _mat([
    [0, 2, 0, 1, -2, 0],
    [-2, 0, 2, 0, 2, -2],
    [0, -2, 0, 0, 0, 1],
    [-1, 0, 0, 0, 1, 0],
    [2, -2, 0, -1, 0, 1],
    [0, 2, -1, 0, -1, 0],
])
J1212_SIGMA = _mat([
    [0, 1, 0, "1/2", -1, 0],
    [-1, 0, 1, 0, 1, -1],
    [0, -1, 0, 0, 0, "1/2"],
    ["-1/2", 0, 0, 0, 1, 0],
    [1, -1, 0, -1, 0, 1],
    [0, 1, "-1/2", 0, -1, 0],
])

TETRA_SEQ = ([8, 4, 7, 8], [7, 4, 8, 7])
REFL_SEQ = (
    [10, 2, 6, 2, 7, 11, 3, 6, 3, 2, 10, 2, 11],
    [11, 3, 7, 3, 2, 6, 2, 11, 10, 3, 6, 3, 7],
)


def _block_pattern(seq):
    """+ for a lone mutation, (+, +, -) for every i, j, i block."""
    out, i = [], 0
    while i < len(seq):
        if i + 2 < len(seq) and seq[i] == seq[i + 2]:
            out += [1, 1, -1]
            i += 3
        else:
            out.append(1)
            i += 1
    return out


def criterion_1(level="desk", jobs=1):
    from .quiver import builtin_quiver

    J = builtin_quiver("J1212")
    as_lists = lambda m: [list(r) for r in m]
    return [
        _timed("J1212 B", lambda: as_lists(J.B) == J1212_B),
        _timed("J1212 Bhat", lambda: as_lists(J.Bhat) == J1212_BHAT),
        _timed("J1212 sigma", lambda: as_lists(J.sigma) == J1212_SIGMA),
        _timed("J1212 weights", lambda: list(J.d), expected=[2, 2, 2, 1, 1, 1]),
    ]


def criterion_2(level="desk", jobs=1):
    from .quiver import builtin_as_reached, builtin_quiver, transposition
    from .tropical import final_tropical, sign_sequence, verify_tropical_periodicity

    A = builtin_quiver("J123121")
    C = builtin_quiver("J123123123")
    t47, t48 = transposition(4, 7, 9), transposition(4, 8, 9)
    final_a = final_tropical(A, TETRA_SEQ[0], t47)
    return [
        _timed("signs J1212 [2,5,2]", lambda: sign_sequence(builtin_quiver("J1212"), [2, 5, 2]), expected=[1, 1, -1]),
        _timed("signs J123121 [8,4,7,8]", lambda: sign_sequence(A, TETRA_SEQ[0]), expected=[1] * 4),
        _timed("signs J123121 [7,4,8,7]", lambda: sign_sequence(A, TETRA_SEQ[1]), expected=[1] * 4),
        _timed("signs J123123123 left", lambda: sign_sequence(C, REFL_SEQ[0]), expected=_block_pattern(REFL_SEQ[0])),
        _timed("signs J123123123 right", lambda: sign_sequence(C, REFL_SEQ[1]), expected=_block_pattern(REFL_SEQ[1])),
        _timed("periodicity J123121", lambda: verify_tropical_periodicity(A, TETRA_SEQ[0], t47, TETRA_SEQ[1], t48)),
        _timed("periodicity J123123123", lambda: verify_tropical_periodicity(C, REFL_SEQ[0], None, REFL_SEQ[1], None)),
        _timed("final quiver J321323", lambda: final_a.seed == builtin_quiver("J321323")),
        _timed(
            "final y-tuple J123121",
            lambda: [final_a.monomial_str(i) for i in range(1, 10)],
            expected=["y1", "y2*y4*y7", "y3*y4", "y8^-1", "y5*y8", "y6*y7*y8", "y4^-1", "y7^-1", "y9"],
        ),
        _timed(
            "final quiver J321321321",
            lambda: all(final_tropical(C, s).seed == builtin_as_reached("J321321321") for s in REFL_SEQ),
        ),
    ]


def criterion_3(level="desk", jobs=1):
    from .qtorus import (
        dilog_factors,
        j1212_closed_form_y5,
        pentagon_check,
        psi_recursion_check,
        unit,
        verify_ad_tau_decomposition,
        verify_dilog_identity,
        verify_tau_identity,
    )
    from .quiver import builtin_quiver, transposition

    N = 6 if level == "desk" else 3
    J121 = builtin_quiver("J121")
    A = builtin_quiver("J123121")
    C = builtin_quiver("J123123123")
    e = lambda i: unit(i, 5)
    inp = {"N": N}
    t47, t48 = transposition(4, 7, 9), transposition(4, 8, 9)
    return [
        _timed("pentagon J121 (Y2, Y4)", lambda: pentagon_check(J121, e(2), e(4), N), inp),
        _timed("psi recursion base q", lambda: psi_recursion_check(J121, e(4), 1, N), inp),
        _timed("psi recursion base q^2", lambda: psi_recursion_check(J121, e(4), 2, N), inp),
        _timed("ad-tau J121 [4]", lambda: verify_ad_tau_decomposition(J121, [4], N=N), inp),
        _timed("ad-tau J1212 [2,5,2]", lambda: verify_ad_tau_decomposition(builtin_quiver("J1212"), [2, 5, 2], N=N), inp),
        _timed("J1212 Y5 closed form", lambda: j1212_closed_form_y5(N), inp),
        _timed("tau identity J123121",
               lambda: verify_tau_identity(A, (TETRA_SEQ[0], None, t47), (TETRA_SEQ[1], None, t48))),
        _timed("tau identity J123123123",
               lambda: verify_tau_identity(C, (REFL_SEQ[0], None, None), (REFL_SEQ[1], None, None))),
        _timed("dilog identity J123121",
               lambda: verify_dilog_identity(A, dilog_factors(A, TETRA_SEQ[0]), dilog_factors(A, TETRA_SEQ[1]), N), inp),
        _timed("dilog identity J123123123",
               lambda: verify_dilog_identity(C, dilog_factors(C, REFL_SEQ[0]), dilog_factors(C, REFL_SEQ[1]), N), inp),
    ]


def random_rationals(count, seed=0, size=3):
    rng = random.Random(seed)
    return [
        tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(size))
        for _ in range(count)
    ]


def criterion_4(level="desk", jobs=1):
    from . import weylcalc as wc

    count = 25 if level == "desk" else 3
    samples = random_rationals(count, seed=4)
    cases = [
        _timed(f"phi commutation {nm}", lambda nm=nm: wc.check_phi_commutation(nm)) for nm in wc._PHI_TABLE
    ]
    cases += [
        _timed("diagram R", lambda: wc.verify_diagram("R")),
        _timed("diagram K", lambda: wc.verify_diagram("K")),
        _timed("P matches pi", lambda: wc.verify_P_matches_pi()),
        _timed("pi tetrahedron", lambda: wc.verify_pi_tetrahedron()),
        _timed("P tetrahedron", lambda: wc.verify_P_tetrahedron()),
        _timed("pi reflection", lambda: wc.verify_pi_reflection()),
        _timed("P reflection", lambda: wc.verify_P_reflection()),
    ]

    def sweep():
        bad = []
        for a, b, g in samples:
            ok = (
                wc.verify_P_matches_pi(a, b, g)
                and wc.verify_pi_tetrahedron(a)
                and wc.verify_P_tetrahedron(a)
                and wc.verify_pi_reflection(a, b, g)
                and wc.verify_P_reflection(a, b, g)
            )
            if not ok:
                bad.append((a, b, g))
        return bad

    cases.append(_timed(f"rational parameter sweep ({count})", sweep, {"count": count}, expected=[]))
    for case in ("tetra", "reflection"):
        for side in "LR":
            cases.append(_timed(f"conjugation chain {case} {side}",
                                lambda c=case, s=side: wc.verify_full_conjugation_chain(s, c)))
    return cases


def criterion_5(level="desk", jobs=1):
    from .qweylrep import oracle_window

    radius = 2 if level == "desk" else 1
    ns = list(itertools.product((-1, 0, 1), repeat=3)) if level == "desk" else [(0, 0, 0), (1, -1, 0)]
    cases = []
    for op, basis, spec in (("r", "u", ns), ("r", "p", ns), ("k", "u", [None]), ("k", "p", [None])):
        def run(op=op, basis=basis, spec=spec):
            rep = oracle_window(op, basis, radius, spec)
            return Case("", not rep.mismatches, {}, None,
                        {"checked": rep.checked, "nonzero": rep.nonzero,
                         "mismatches": rep.mismatches[:5], "indeterminate_skipped": len(rep.indeterminate)})
        cases.append(_timed(f"closed form vs oracle {op}-{basis}", run,
                            {"radius": radius, "spectral": len(spec)}))
    return cases


def _sweep_case(rep):
    return Case("", rep.ok, {}, None,
                {"pairs": rep.pairs, "nonzero": rep.nonzero, "failures": rep.failures[:5]})


def criterion_6(level="desk", jobs=1):
    from .qweylrep import tetra_sweep

    count = 200 if level == "desk" else 4
    rng = random.Random(6)
    ns = [tuple(rng.choice((-1, 0, 1)) for _ in range(6)) for _ in range(count)]
    cases = []
    for basis in "up":
        cases.append(_timed(f"tetrahedron {basis}-basis n=0", lambda b=basis: _sweep_case(tetra_sweep(b, (0,) * 6, 1, jobs)),
                            {"window": 1}))

        def many(b=basis):
            total = failures = pairs = 0
            first = []
            for n in ns:
                rep = tetra_sweep(b, n, 1, jobs)
                total += rep.nonzero
                pairs += rep.pairs
                failures += len(rep.failures)
                if rep.failures and not first:
                    first = [n, rep.failures[0]]
            return Case("", failures == 0, {}, None,
                        {"pairs": pairs, "nonzero": total, "failures": failures, "first_failure": first})

        cases.append(_timed(f"tetrahedron {basis}-basis {count} random n", many, {"window": 1, "samples": count, "seed": 6}))
    return cases


DUALITY_WITNESSES = (
    ((-1, -1, 1, -1, -1, -1), (0, -1, 0, -1, 0, -1)),
    ((0, 0, 1, 1, 0, -1), (0, 1, 0, 0, 1, -1)),
    ((1, 0, 0, -1, 1, -1), (1, -1, 1, 1, -1, 0)),
    ((0, 0, 1, -1, 0, -1), (1, 0, 0, 1, -1, 1)),
)


def criterion_7(level="desk", jobs=1):
    from .qseries import verify_qbinomial_duality
    from .qweylrep import duality_match, is_signed_monomial

    top = 6 if level == "desk" else 3
    count = 50 if level == "desk" else 5
    rng = random.Random(7)
    triples = [tuple(rng.randint(-3, 8) for _ in range(3)) for _ in range(count)]

    def cube():
        return [rst for rst in itertools.product(range(top + 1), repeat=3) if not verify_qbinomial_duality(*rst)]

    def rand():
        return [rst for rst in triples if not verify_qbinomial_duality(*rst)]

    def witness(a, c):
        left, right, rst = duality_match(a, c)
        ok = left is not None and left == right and is_signed_monomial(left)
        return Case("", ok, {}, None, {"rst": rst, "ratio": str(left)})

    cases = [
        _timed(f"duality cube 0..{top}", cube, {"top": top}, expected=[]),
        _timed(f"duality {count} random triples", rand, {"range": [-3, 8], "seed": 7}, expected=[]),
    ]
    for a, c in DUALITY_WITNESSES:
        cases.append(_timed(f"duality inside the tetrahedron sides a={a}", lambda a=a, c=c: witness(a, c), {"a": a, "c": c}))
    return cases


def criterion_8(level="desk", jobs=1):
    from .qweylrep import enlargement_check, reflection_chains, reflection_sweep

    columns = None
    if level != "desk":
        rng = random.Random(8)
        allc = list(itertools.product((-1, 0, 1), repeat=9))
        columns = rng.sample(allc, 60)
    cases = [_timed("reflection u-basis window 1", lambda: _sweep_case(reflection_sweep("u", 1, jobs, columns)),
                    {"window": 1, "columns": "all" if columns is None else len(columns)})]

    count = 20 if level == "desk" else 3
    chains = reflection_chains("u")
    rows = chains[0].conservation()
    rng = random.Random(88)
    picked = []
    while len(picked) < count:
        a = tuple(rng.choice((-1, 0, 1)) for _ in range(9))
        c = tuple(rng.choice((-1, 0, 1)) for _ in range(9))
        if chains[0].consistent(a, c, rows):
            picked.append((a, c))
    cases.append(_timed(f"range enlargement +2 ({count} cases)", lambda: enlargement_check(chains, picked, 2),
                        {"count": count, "seed": 88}, expected=[]))
    return cases


NCQD_TOL = {
    "inversion": 1e-8,
    "recursion_b": 1e-8,
    "recursion_binv": 1e-8,
    "ramanujan_full": 1e-6,
    "ram1": 1e-6,
    "ram2": 1e-6,
    "heine": 1e-5,
}
FOURIER_TOL = 1e-4
NCQD_B = (0.7, 0.9)


def criterion_9(level="desk", jobs=1):
    from .ncqd import ModularParams, check_identity

    names = list(NCQD_TOL) if level == "desk" else ["inversion", "recursion_b", "ram1"]
    cases = []
    for b in NCQD_B:
        P = ModularParams(b)
        for name in names:
            t = time.perf_counter()
            r = float(check_identity(name, P))
            cases.append(Case(f"{name} b={b}", r < NCQD_TOL[name], {"b": b, "tol": NCQD_TOL[name]},
                              f"< {NCQD_TOL[name]}", r, round(time.perf_counter() - t, 3)))
    return cases


def criterion_fourier(level="desk", jobs=1):
    from .ncqd import ModularParams, fourier_check

    cases = []
    for b in NCQD_B if level == "desk" else NCQD_B[:1]:
        t = time.perf_counter()
        r = float(fourier_check(ModularParams(b)))
        cases.append(Case(f"R kernel coordinate vs momentum b={b}", r < FOURIER_TOL, {"b": b, "tol": FOURIER_TOL},
                          f"< {FOURIER_TOL}", r, round(time.perf_counter() - t, 3)))
    return cases


@dataclass(frozen=True)
class Criterion:
    key: str
    title: str
    run: object
    budget: float  # seconds allowed at desk level


CRITERIA = (
    Criterion("1", "J1212 exchange matrices", criterion_1, 1),
    Criterion("2", "tropical sign sequences and periodicity", criterion_2, 1),
    Criterion("3", "quantum torus identities (N=6)", criterion_3, 60),
    Criterion("4", "Weyl calculus", criterion_4, 10),
    Criterion("5", "matrix elements vs oracle", criterion_5, 300),
    Criterion("6", "tetrahedron equation in representation", criterion_6, 600),
    Criterion("7", "q-binomial duality", criterion_7, 10),
    Criterion("8", "reflection equation in representation", criterion_8, 1800),
    Criterion("9", "noncompact dilogarithm identities", criterion_9, 120),
    Criterion("F", "kernel Fourier cross-check", criterion_fourier, 120),
)


def run_criterion(crit, level="desk", jobs=1):
    t = time.perf_counter()
    cases = crit.run(level, jobs)
    for c in cases:
        c.name = f"[{crit.key}] {c.name}"
    elapsed = time.perf_counter() - t
    if level == "desk":
        cases.append(Case(f"[{crit.key}] runtime", elapsed < crit.budget, {}, f"< {crit.budget} s", round(elapsed, 2)))
    return Report(f"criterion-{crit.key}", cases, round(elapsed, 3))


def run_all(level="desk", jobs=1, keys=None, echo=None):
    """Run the selected criteria; ``echo`` receives one summary line per criterion."""
    t = time.perf_counter()
    out = Report(f"acceptance-{level}")
    for crit in CRITERIA:
        if keys and crit.key not in keys:
            continue
        rep = run_criterion(crit, level, jobs)
        out.cases.extend(rep.cases)
        if echo:
            echo(summary_line(crit, rep))
    out.wall_time = round(time.perf_counter() - t, 3)
    return out


def summary_line(crit, rep):
    status = "PASS" if rep.ok else "FAIL"
    bad = [c.name for c in rep.cases if not c.passed]
    tail = f"  failing: {', '.join(bad)}" if bad else ""
    return f"criterion {crit.key:>2} {status}  {crit.title}  ({rep.totals['passed']}/{rep.totals['cases']} cases, {rep.wall_time:.1f} s){tail}"
