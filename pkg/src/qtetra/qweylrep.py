"""Matrix elements of the R and K operators on integer-labelled basis states.

Two representations of the q-Weyl pairs are used. In the u-basis
``e^{p}|a> = |a-1>`` and ``e^{u}|a> = q^{w a}|a>``; in the p-basis
``e^{p}|c> = q^{w c}|c>`` and ``e^{u}|c> = |c+1>``, where w in {1, 2} is the
leg weight. Closed forms are checked against :func:`oracle_elem`, which
applies each exponential and dilogarithm series to basis vectors directly.

Products of several operators are contracted by :class:`Chain`. Every
factor's support is parametrised as ``out = P in + D m + off`` with m >= 0,
so the set of contributing internal states is a polytope; its bounds come
from linear programming over the delta constraints and the support cutoffs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import linprog

from .qseries import ONE, ZERO, RatQ, inv_qfactorial, psi_series_coeff, qbinomial_duality_sides, qpochhammer


class RangeError(RuntimeError):
    """Raised when the contributing internal states are not provably finite."""


class IndeterminateElement(ArithmeticError):
    """A closed form whose literal reading is 0 * infinity."""


@dataclass(frozen=True)
class LegSpec:
    weights: tuple

    @property
    def count(self):
        return len(self.weights)

    @classmethod
    def a_type(cls, n):
        return cls((1,) * n)

    @classmethod
    def c_type(cls, n=9):
        """Legs 3, 6, 9, ... carry weight 2."""
        return cls(tuple(2 if i % 3 == 0 else 1 for i in range(1, n + 1)))

    def __post_init__(self):
        if any(w not in (1, 2) for w in self.weights):
            raise ValueError("leg weights must be 1 or 2")


@dataclass(frozen=True)
class IntSpectral:
    """Spectral parameters as integers n_i = lambda_i / hbar."""

    n: tuple

    def nij(self, i, j):
        return self.n[i - 1] - self.n[j - 1]

    @classmethod
    def zero(cls, k):
        return cls((0,) * k)


# ---------------------------------------------------------------------------
# closed forms


@lru_cache(maxsize=1 << 20)
def r_elem_u(a, b, n=(0, 0, 0)):
    a1, a2, a3 = a
    b1, b2, b3 = b
    if a1 + a2 != b1 + b2 or a2 + a3 != b2 + b3:
        return ZERO
    m = a2 - b3
    if m < 0:
        return ZERO
    n13, n23 = n[0] - n[2], n[1] - n[2]
    return psi_series_coeff(m).shift((b1 - b3 + n13) * (a2 - b3 - n23) + n13 * n23)


@lru_cache(maxsize=1 << 20)
def r_elem_p(c, d, n=(0, 0, 0)):
    c1, c2, c3 = c
    d1, d2, d3 = d
    if c2 != d1 + d3 or c1 + c3 != d2:
        return ZERO
    n13, n23 = n[0] - n[2], n[1] - n[2]
    m = c1 - d1 + n23
    if m < 0:
        return ZERO
    return psi_series_coeff(m).shift(m * (d2 - c2 + n13))


def _k_value(sign_exp, qexp, x, k, strict):
    # (q^{-4x}; q^4)_k / ((q^4; q^4)_k (q^2; q^2)_x)
    if k < 0 or x < 0:
        if strict and k < 0 and k <= x <= -1:
            raise IndeterminateElement(f"pole of (q^{-4 * x};q^4)_{k} meets 1/(q^4;q^4)_{k} = 0")
        return ZERO
    num = qpochhammer(-4 * x, 4, k)
    if not num:
        return ZERO
    val = num * inv_qfactorial(4, k) * inv_qfactorial(2, x)
    return val.shift(qexp) if sign_exp % 2 == 0 else -val.shift(qexp)


@lru_cache(maxsize=1 << 20)
def k_elem_u(a, b, strict=False):
    """Spectral parameters zero; legs weighted (1, 2, 1, 2).

    With ``strict`` the corner where a negative-index inverse Pochhammer meets
    a pole of the numerator raises :class:`IndeterminateElement` instead of
    returning the value 0 that the operator oracle assigns to it.
    """
    a1, a2, a3, a4 = a
    b1, b2, b3, b4 = b
    if a2 + a3 + a4 != b2 + b3 + b4 or a1 + 2 * a2 + a3 != b1 + 2 * b2 + b3:
        return ZERO
    x = a2 + b2 - a4 - b4
    k = b2 - a4
    e = x * (b1 + 2 * b2 - b3 - 2 * b4 + 1) + 2 * k * (a2 - a4 + 1)
    return _k_value(a2 - b4, e, x, k, strict)


@lru_cache(maxsize=1 << 20)
def k_elem_p(c, d, strict=False):
    c1, c2, c3, c4 = c
    d1, d2, d3, d4 = d
    if d1 + d3 != c1 + c3 or d2 + d4 != c2 + c4:
        return ZERO
    x = c1 - d1
    k = c2 - d1 - d4
    e = x * (-d1 + d3 - 2 * d4 + 1) + 2 * k * (d2 + d4 - c3 + 1)
    return _k_value(c1 + c2 - d4, e, x, k, strict)


def k_indeterminate(basis, out, inp):
    """True where the literal closed form reads 0 * infinity."""
    f = k_elem_u if basis == "u" else k_elem_p
    try:
        f(tuple(out), tuple(inp), True)
    except IndeterminateElement:
        return True
    return False


def elem(op, basis, out, inp, n=None):
    """Closed-form element of ``op`` in {"r", "k"}; ``n`` only applies to R."""
    out, inp = tuple(out), tuple(inp)
    if op == "r":
        n = tuple(n) if n is not None else (0, 0, 0)
        return (r_elem_u if basis == "u" else r_elem_p)(out, inp, n)
    if n is not None and any(n):
        raise ValueError("K is only available at zero spectral parameters")
    return (k_elem_u if basis == "u" else k_elem_p)(out, inp)


# ---------------------------------------------------------------------------
# operator oracle


@dataclass(frozen=True)
class Swap:
    i: int
    j: int


@dataclass(frozen=True)
class ExpPU:
    """exp(p_i * sum_j c_j u_j / hbar)."""

    i: int
    c: tuple


@dataclass(frozen=True)
class ExpU:
    """exp(sum_j n_j u_j) with integer n_j = (coefficient of lambda) / hbar."""

    n: tuple


@dataclass(frozen=True)
class PsiSeries:
    """Psi_{q^base}(q^kappa exp(sum_j alpha_j p_j + beta_j u_j))^(+-1)."""

    base: int
    alpha: tuple
    beta: tuple
    kappa: int = 0
    inverse: bool = False


@dataclass(frozen=True)
class OperatorSpec:
    """Factors listed as written; the rightmost acts first."""

    name: str
    weights: tuple
    factors: tuple


def r_operator(n=(0, 0, 0)):
    n1, n2, n3 = n
    n23 = n2 - n3
    return OperatorSpec(
        "R",
        (1, 1, 1),
        (
            PsiSeries(1, (1, -1, 1), (1, 0, -1), kappa=n1 - n3),
            Swap(2, 3),
            ExpPU(1, (0, -1, 1)),
            ExpU((-n23, 0, n23)),
        ),
    )


def k_operator():
    outer = dict(alpha=(0, 1, -2, 1), beta=(0, 1, 0, -1))
    return OperatorSpec(
        "K",
        (1, 2, 1, 2),
        (
            PsiSeries(2, **outer),
            PsiSeries(1, (1, -1, 1, 0), (1, 0, -1, 0)),
            PsiSeries(2, inverse=True, **outer),
            Swap(2, 4),
            ExpPU(1, (0, -1, 0, 1)),
        ),
    )


def _act(f, basis, w, state):
    """Apply a non-series factor to a basis state; returns (state, q-exponent)."""
    x = list(state)
    if isinstance(f, Swap):
        x[f.i - 1], x[f.j - 1] = x[f.j - 1], x[f.i - 1]
        return tuple(x), 0
    if isinstance(f, ExpU):
        if basis == "u":
            return state, sum(nj * wj * xj for nj, wj, xj in zip(f.n, w, x))
        return tuple(xj + nj for xj, nj in zip(x, f.n)), 0
    if isinstance(f, ExpPU):
        i = f.i - 1
        if f.c[i]:
            raise ValueError("exp(p_i u_i) is not handled")
        if basis == "u":
            s = sum(cj * wj * xj for cj, wj, xj in zip(f.c, w, x))
            x[i] -= s
        else:
            s = w[i] * x[i]
            for j, cj in enumerate(f.c):
                x[j] += s * cj
        return tuple(x), 0
    raise TypeError(f)


def _act_power(f, basis, w, state, k):
    """exp(k (alpha.p + beta.u)) on a basis state, Weyl ordered."""
    a = [k * t for t in f.alpha]
    b = [k * t for t in f.beta]
    half = sum(wj * aj * bj for wj, aj, bj in zip(w, a, b))
    if half % 2:
        raise ValueError("half-integer q-power in the Weyl-ordered exponential")
    if basis == "u":
        e = sum(wj * bj * xj for wj, bj, xj in zip(w, b, state)) - half // 2
        return tuple(xj - aj for xj, aj in zip(state, a)), e
    e = sum(wj * aj * xj for wj, aj, xj in zip(w, a, state)) + half // 2
    return tuple(xj + bj for xj, bj in zip(state, b)), e


def _walk(spec, basis, inp, ks):
    """Final state and coefficient for series indices ``ks`` (one per series factor)."""
    w = spec.weights
    state, coeff, e = tuple(inp), ONE, 0
    it = iter(reversed(ks))
    for f in reversed(spec.factors):
        if isinstance(f, PsiSeries):
            k = next(it)
            c = psi_series_coeff(k, f.inverse, f.base)
            if not c:
                return state, ZERO
            coeff = coeff * c
            state, de = _act_power(f, basis, w, state, k)
            e += de + k * f.kappa
        else:
            state, de = _act(f, basis, w, state)
            e += de
    return state, coeff.shift(e)


def _series_bounds(spec, basis, inp, lo, hi):
    """Upper bounds on every series index such that the final state can lie in [lo, hi]."""
    s = sum(isinstance(f, PsiSeries) for f in spec.factors)
    base, _ = _walk(spec, basis, inp, (0,) * s)
    cols = []
    for j in range(s):
        ks = [0] * s
        ks[j] = 1
        st, _ = _walk(spec, basis, inp, tuple(ks))
        cols.append([x - y for x, y in zip(st, base)])
    A = np.array(cols, dtype=float).T.reshape(len(base), s)
    b0 = np.array(base, dtype=float)
    return _lp_upper(A, np.array(lo) - b0, np.array(hi) - b0, s)


def _lp_upper(A, lo, hi, s):
    A_ub = np.vstack([A, -A])
    b_ub = np.concatenate([hi, -lo])
    out = []
    for j in range(s):
        c = np.zeros(s)
        c[j] = -1.0
        res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(0, None)] * s, method="highs")
        if res.status == 2:
            return None
        if res.status != 0:
            raise RangeError(f"series index {j} is unbounded")
        out.append(int(math.floor(-res.fun + 1e-7)))
    return out


def oracle_column(spec, basis, inp, lo, hi):
    """All elements <out|op|inp> with lo <= out <= hi, from the factor actions."""
    caps = _series_bounds(spec, basis, tuple(inp), lo, hi)
    out = {}
    if caps is None:
        return out
    for ks in itertools.product(*(range(c + 1) for c in caps)):
        st, v = _walk(spec, basis, inp, ks)
        if v and all(l <= x <= h for l, x, h in zip(lo, st, hi)):
            out[st] = out.get(st, ZERO) + v
    return {k: v for k, v in out.items() if v}


def oracle_elem(spec, basis, out, inp):
    out = tuple(out)
    return oracle_column(spec, basis, inp, out, out).get(out, ZERO)


@dataclass
class WindowReport:
    op: str
    basis: str
    checked: int = 0
    nonzero: int = 0
    mismatches: list = field(default_factory=list)
    indeterminate: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.mismatches


def oracle_window(op, basis, radius=2, spectral=(None,)):
    """Compare the closed form with the oracle on every (out, in) in [-radius, radius]^legs.

    For R, ``spectral`` lists the spectral triples to sweep. Queries at which
    the K closed form is indeterminate are recorded and excluded.
    """
    rep = WindowReport(op, basis)
    legs = 3 if op == "r" else 4
    rng = range(-radius, radius + 1)
    lo, hi = (-radius,) * legs, (radius,) * legs
    for n in spectral:
        spec = r_operator(n or (0, 0, 0)) if op == "r" else k_operator()
        for inp in itertools.product(rng, repeat=legs):
            col = oracle_column(spec, basis, inp, lo, hi)
            for out in itertools.product(rng, repeat=legs):
                if op == "k" and k_indeterminate(basis, out, inp):
                    rep.indeterminate.append((out, inp))
                    continue
                got = elem(op, basis, out, inp, n)
                want = col.get(out, ZERO)
                rep.checked += 1
                if want:
                    rep.nonzero += 1
                if got != want:
                    rep.mismatches.append((out, inp, n, str(got), str(want)))
    return rep


# ---------------------------------------------------------------------------
# support parametrisation: out = P in + D m + off, m >= 0


def support_map(op, basis, n=(0, 0, 0)):
    """(P, D, off) with every nonzero element's output of the form P in + D m + off, m >= 0."""
    if op == "r" and basis == "u":
        return ((1, 1, -1), (0, 0, 1), (0, 1, 0)), ((-1,), (1,), (-1,)), (0, 0, 0)
    if op == "r":
        n23 = n[1] - n[2]
        return ((1, 0, 0), (1, 0, 1), (-1, 1, 0)), ((1,), (0,), (-1,)), (-n23, 0, n23)
    if any(n):
        raise ValueError("K is only available at zero spectral parameters")
    if basis == "u":
        # params: k = b2 - a4 and j = x - k with x = a2 + b2 - a4 - b4
        return (
            ((1, 2, 0, -2), (0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0)),
            ((-1, -1), (0, 1), (1, -1), (-1, 0)),
            (0, 0, 0, 0),
        )
    # params: k = c2 - d1 - d4 and j = x - k with x = c1 - d1
    return (
        ((1, 0, 0, 0), (1, 0, 0, 1), (0, 0, 1, 0), (-1, 1, 0, 0)),
        ((1, 1), (1, 0), (-1, -1), (-1, 0)),
        (0, 0, 0, 0),
    )


# ---------------------------------------------------------------------------
# contraction of operator products


@dataclass(frozen=True)
class Factor:
    op: str
    legs: tuple
    n: tuple = (0, 0, 0)

    @classmethod
    def parse(cls, text, spectral=None):
        """"R124" or "K4689"; spectral integers per leg pick the R parameters."""
        op, legs = text[0].lower(), tuple(int(ch) for ch in text[1:])
        n = (0, 0, 0)
        if op == "r" and spectral is not None:
            n = tuple(spectral[i - 1] for i in legs)
        return cls(op, legs, n)


class Chain:
    """Operator product F_1 F_2 ... F_r on L legs; F_r acts first.

    Matrix elements <a| F_1 ... F_r |c> are sums over internal states; all
    contributing paths are enumerated through the support parametrisation.
    """

    def __init__(self, factors, weights, basis):
        self.factors = tuple(factors)
        self.weights = tuple(weights)
        self.basis = basis
        self.L = len(weights)
        for f in self.factors:
            want = (1, 1, 1) if f.op == "r" else (1, 2, 1, 2)
            got = tuple(self.weights[i - 1] for i in f.legs)
            if got != want:
                raise ValueError(f"factor {f} expects leg weights {want}, got {got}")
        self._maps = [support_map(f.op, basis, f.n) for f in self.factors]
        self._affine()

    # the application order is reversed(factors)
    def _affine(self):
        L = self.L
        T = np.eye(L, dtype=np.int64)
        off = np.zeros(L, dtype=np.int64)
        Ms = []
        steps = []
        nparam = 0
        self._param_slices = []
        for f, (P, D, o) in zip(reversed(self.factors), reversed(self._maps)):
            idx = [i - 1 for i in f.legs]
            k = len(D[0])
            Pm = np.eye(L, dtype=np.int64)
            Pm[np.ix_(idx, idx)] = np.array(P)
            T = Pm @ T
            off = Pm @ off
            off[idx] += np.array(o)
            Ms = [Pm @ m for m in Ms]
            for c in range(k):
                col = np.zeros(L, dtype=np.int64)
                col[idx] = [row[c] for row in D]
                Ms.append(col)
            self._param_slices.append(slice(nparam, nparam + k))
            nparam += k
            M = np.array(Ms).T if Ms else np.zeros((L, 0), dtype=np.int64)
            steps.append((T.copy(), M.copy(), off.copy()))
        self.nparam = nparam
        self.steps = steps
        self.T, self.M, self.off = steps[-1]

    def conservation(self):
        """Integer rows f with f.(a - T c - off) = 0 whenever an element is nonzero."""
        return _left_null(self.M)

    def consistent(self, a, c, rows=None):
        rows = self.conservation() if rows is None else rows
        r = np.array(a) - self.T @ np.array(c) - self.off
        return all(int(f @ r) == 0 for f in rows)

    def ranges(self, c_box, a_box, pad=0):
        """Bounds on every parameter and on every intermediate state over c in c_box, a in a_box.

        Returns (param_hi, state_boxes); ``pad`` widens everything (parameters
        also below zero) for the range-enlargement check.
        """
        L, K = self.L, self.nparam
        (clo, chi), (alo, ahi) = c_box, a_box
        # variables: m (K), c (L)
        A_eq_rows = []
        nvar = K + L
        A_ub, b_ub = [], []
        for i in range(L):
            row = np.concatenate([self.M[i], self.T[i]]).astype(float)
            A_ub.append(row)
            b_ub.append(ahi[i] - self.off[i])
            A_ub.append(-row)
            b_ub.append(-(alo[i] - self.off[i]))
        bounds = [(0, None)] * K + [(clo[i], chi[i]) for i in range(L)]
        A_ub, b_ub = np.array(A_ub), np.array(b_ub, dtype=float)

        def opt(obj):
            res = linprog(obj, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
            if res.status == 2:
                return None
            if res.status != 0:
                raise RangeError("contributing internal states are not bounded")
            return res.fun

        del A_eq_rows
        param_hi = []
        for j in range(K):
            obj = np.zeros(nvar)
            obj[j] = -1.0
            v = opt(obj)
            if v is None:
                return None
            param_hi.append(int(math.floor(-v + 1e-7)) + pad)
        boxes = []
        for T, M, off in self.steps[:-1]:
            lo, hi = [], []
            kk = M.shape[1]
            for i in range(L):
                obj = np.zeros(nvar)
                obj[:kk] = M[i]
                obj[K:] = T[i]
                vmin = opt(obj)
                vmax = opt(-obj)
                if vmin is None or vmax is None:
                    return None
                lo.append(int(math.ceil(vmin + off[i] - 1e-7)) - pad)
                hi.append(int(math.floor(-vmax + off[i] + 1e-7)) + pad)
            boxes.append((tuple(lo), tuple(hi)))
        boxes.append((tuple(x - pad for x in alo), tuple(x + pad for x in ahi)))
        return param_hi, boxes, pad

    def column(self, c, rng, a_box=None):
        """{a: <a|chain|c>} for a in the final box of ``rng``."""
        if rng is None:
            return {}
        param_hi, boxes, pad = rng
        states = {tuple(c): ONE}
        for step, (f, (P, D, o)) in enumerate(zip(reversed(self.factors), reversed(self._maps))):
            sl = self._param_slices[step]
            his = param_hi[sl]
            lo_box, hi_box = boxes[step]
            idx = [i - 1 for i in f.legs]
            ev = self._evaluator(f)
            params = list(itertools.product(*(range(-pad, h + 1) for h in his)))
            new = {}
            for st, coef in states.items():
                sub = tuple(st[i] for i in idx)
                base = [sum(p * s for p, s in zip(row, sub)) + oo for row, oo in zip(P, o)]
                for m in params:
                    out = [bv + sum(dv * mv for dv, mv in zip(drow, m)) for bv, drow in zip(base, D)]
                    ok = True
                    for j, x in zip(idx, out):
                        if not lo_box[j] <= x <= hi_box[j]:
                            ok = False
                            break
                    if not ok:
                        continue
                    v = ev(tuple(out), sub)
                    if not v:
                        continue
                    full = list(st)
                    for j, x in zip(idx, out):
                        full[j] = x
                    key = tuple(full)
                    prev = new.get(key)
                    v = coef * v
                    new[key] = v if prev is None else prev + v
            states = new
        if a_box is not None:
            lo, hi = a_box
            states = {k: v for k, v in states.items() if all(l <= x <= h for l, x, h in zip(lo, k, hi))}
        return {k: v for k, v in states.items() if v}

    def _evaluator(self, f):
        if f.op == "r":
            g = r_elem_u if self.basis == "u" else r_elem_p
            n = f.n
            return lambda out, inp: g(out, inp, n)
        return k_elem_u if self.basis == "u" else k_elem_p

    def element(self, a, c, pad=0):
        a, c = tuple(a), tuple(c)
        rng = self.ranges((c, c), (a, a), pad)
        return self.column(c, rng).get(a, ZERO)


def _left_null(M):
    """Integer basis of {f : f M = 0} via exact elimination."""
    L, K = M.shape
    rows = [[Fraction(int(M[i, j])) for j in range(K)] + [Fraction(int(i == r)) for r in range(L)] for i in range(L)]
    piv_row = 0
    for col in range(K):
        piv = next((r for r in range(piv_row, L) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[piv_row], rows[piv] = rows[piv], rows[piv_row]
        pv = rows[piv_row][col]
        rows[piv_row] = [x / pv for x in rows[piv_row]]
        for r in range(L):
            if r != piv_row and rows[r][col] != 0:
                fct = rows[r][col]
                rows[r] = [x - fct * y for x, y in zip(rows[r], rows[piv_row])]
        piv_row += 1
    out = []
    for r in range(piv_row, L):
        v = rows[r][K:]
        den = math.lcm(*(x.denominator for x in v))
        iv = [int(x * den) for x in v]
        g = math.gcd(*iv)
        out.append(np.array([x // g for x in iv], dtype=np.int64))
    return out


def _same_rowspace(r1, r2):
    if len(r1) != len(r2):
        return False
    if not r1:
        return True
    a = np.array(r1)
    return np.linalg.matrix_rank(np.vstack([a, np.array(r2)])) == np.linalg.matrix_rank(a)


# ---------------------------------------------------------------------------
# tetrahedron equation

TETRA_LEFT = ("R124", "R135", "R236", "R456")
TETRA_RIGHT = ("R456", "R236", "R135", "R124")


def tetra_chains(basis="u", n=(0,) * 6):
    w = (1,) * 6
    left = Chain([Factor.parse(t, n) for t in TETRA_LEFT], w, basis)
    right = Chain([Factor.parse(t, n) for t in TETRA_RIGHT], w, basis)
    return left, right


def tetra_conservation(a, c):
    """The three linear conditions outside of which both sides vanish (u-basis)."""
    return (
        a[0] + a[1] + a[2] - c[0] - c[1] - c[2],
        -a[0] + a[3] + a[4] + c[0] - c[3] - c[4],
        a[2] + a[4] + a[5] - c[2] - c[4] - c[5],
    )


def tetra_sides(basis, a, c, n=(0,) * 6, pad=0):
    left, right = tetra_chains(basis, tuple(n))
    return left.element(a, c, pad), right.element(a, c, pad)


def verify_tetrahedron_rep(basis, a, c, n=(0,) * 6):
    lhs, rhs = tetra_sides(basis, a, c, n)
    return lhs == rhs


def tetra_b2_terms(a, c):
    """Terms of both u-basis sides (n = 0) as functions of the free index b2.

    The remaining internal indices follow from the deltas; returns two dicts
    b2 -> term.
    """
    a1, a2, a3, a4, a5, a6 = a
    c1, c2, c3, c4, c5, c6 = c
    lhs, rhs = {}, {}
    z = (0, 0, 0)
    lo = min(a + c) - 12
    hi = max(a + c) + 12
    for b2 in range(lo, hi + 1):
        b1, b3, b4 = a1 + a2 - b2, a1 + a2 + a3 - b2 - c1, a2 + a4 - b2
        b5, b6 = -a1 - a2 + a5 + b2 + c1, a6 - b2 + c2
        t = (
            r_elem_u((a1, a2, a4), (b1, b2, b4), z)
            * r_elem_u((b1, a3, a5), (c1, b3, b5), z)
            * r_elem_u((b2, b3, a6), (c2, c3, b6), z)
            * r_elem_u((b4, b5, b6), (c4, c5, c6), z)
        )
        if t:
            lhs[b2] = t
        b1, b3, b4 = -b2 + c1 + c2, a2 + a3 - b2, -b2 + c2 + c4
        b5, b6 = a4 + a5 + b2 - c2 - c4, -a4 + a6 - b2 + c2 + c4
        t = (
            r_elem_u((a4, a5, a6), (b4, b5, b6), z)
            * r_elem_u((a2, a3, b6), (b2, b3, c6), z)
            * r_elem_u((a1, b3, b5), (b1, c3, c5), z)
            * r_elem_u((b1, b2, b4), (c1, c2, c4), z)
        )
        if t:
            rhs[b2] = t
    return lhs, rhs


def duality_parameters(a, c):
    a1, a2, a3, a4, a5, a6 = a
    c1, c2, c3, c4, c5, c6 = c
    r = -a1 + 2 * a4 + a5 - a6 + c1 - c2 - c4
    s = a4 + a5 - a6 - c2
    t = a1 + a2 + a3 - a4 - a5 - c1
    return r, s, t


def duality_match(a, c):
    """Both representation sides divided by the matching duality sums.

    The two ratios must coincide and be a signed power of q. Returns
    (ratio_left, ratio_right, (r, s, t)).
    """
    lhs_terms, rhs_terms = tetra_b2_terms(a, c)
    lhs = sum(lhs_terms.values(), ZERO)
    rhs = sum(rhs_terms.values(), ZERO)
    r, s, t = duality_parameters(a, c)
    d_l, d_r = qbinomial_duality_sides(r, s, t)
    if not d_l or not d_r:
        return None, None, (r, s, t)
    return lhs / d_l, rhs / d_r, (r, s, t)


def is_signed_monomial(x):
    return bool(x) and x.is_laurent() and x.n.degree() == 0 and abs(x.n[0]) == 1


# ---------------------------------------------------------------------------
# 3D reflection equation (zero spectral parameters)

REFL_LEFT = ("R457", "K4689", "K2379", "R258", "R178", "K1356", "R124")
REFL_RIGHT = tuple(reversed(REFL_LEFT))
REFL_LEGS = LegSpec.c_type(9)


def reflection_chains(basis="u"):
    w = REFL_LEGS.weights
    return (
        Chain([Factor.parse(t) for t in REFL_LEFT], w, basis),
        Chain([Factor.parse(t) for t in REFL_RIGHT], w, basis),
    )


def reflection_sides(a, c, basis="u", pad=0):
    left, right = reflection_chains(basis)
    return left.element(a, c, pad), right.element(a, c, pad)


def verify_reflection_rep(a, c, basis="u"):
    lhs, rhs = reflection_sides(a, c, basis)
    return lhs == rhs


# ---------------------------------------------------------------------------
# window sweeps


@dataclass
class SweepReport:
    name: str
    pairs: int = 0
    nonzero: int = 0
    failures: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def window_ranges(left, right, radius, pad=0):
    box = ((-radius,) * left.L, (radius,) * left.L)
    return left.ranges(box, box, pad), right.ranges(box, box, pad)


def _group_by_charge(rows, L, radius):
    """Window states keyed by their values under the conservation rows."""
    rng = range(-radius, radius + 1)
    F = np.array(rows, dtype=np.int64).reshape(len(rows), L)
    groups = {}
    for a in itertools.product(rng, repeat=L):
        groups.setdefault(tuple((F @ np.array(a)).tolist()), []).append(a)
    return F, groups


def sweep_columns(left, right, radius, cs, pad=0, rngs=None, groups=None):
    """Compare both sides on every conservation-consistent (a, c) with c in ``cs``.

    Returns (pairs, nonzero, failures).
    """
    rows_l, rows_r = left.conservation(), right.conservation()
    if not _same_rowspace(rows_l, rows_r):
        raise RangeError("the two sides have different conservation laws")
    rl, rr = rngs or window_ranges(left, right, radius, pad)
    box = ((-radius,) * left.L, (radius,) * left.L)
    F, groups = groups or _group_by_charge(rows_l, left.L, radius)
    pairs = nonzero = 0
    failures = []
    for c in cs:
        cl = left.column(c, rl, box)
        cr = right.column(c, rr, box)
        key = tuple((F @ (left.T @ np.array(c) + left.off)).tolist())
        allowed = groups.get(key, [])
        for a in allowed:
            pairs += 1
            x, y = cl.get(a, ZERO), cr.get(a, ZERO)
            if x:
                nonzero += 1
            if x != y:
                failures.append((a, tuple(c), f"{x} != {y}"))
        allowed = set(allowed)
        for a in set(cl) | set(cr):
            if a not in allowed:
                failures.append((a, tuple(c), "nonzero outside the conservation laws"))
    return pairs, nonzero, failures


def consistent_pairs(left, radius):
    """Count (a, c) in the window satisfying the conservation laws."""
    F, groups = _group_by_charge(left.conservation(), left.L, radius)
    total = 0
    for c in itertools.product(range(-radius, radius + 1), repeat=left.L):
        key = tuple((F @ (left.T @ np.array(c) + left.off)).tolist())
        total += len(groups.get(key, ()))
    return total


def _chunks(seq, k):
    k = max(1, k)
    return [seq[i::k] for i in range(k)]


def _tetra_worker(args):
    basis, n, radius, cs = args
    left, right = tetra_chains(basis, n)
    return sweep_columns(left, right, radius, cs)


def _refl_worker(args):
    basis, radius, cs = args
    left, right = reflection_chains(basis)
    return sweep_columns(left, right, radius, cs)


def _run_pool(worker, tasks, jobs):
    if jobs <= 1:
        return [worker(t) for t in tasks]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks))


def _merge(name, parts):
    rep = SweepReport(name)
    for pairs, nonzero, failures in parts:
        rep.pairs += pairs
        rep.nonzero += nonzero
        rep.failures.extend(failures)
    return rep


def tetra_sweep(basis="u", n=(0,) * 6, radius=1, jobs=1):
    """Both sides of the tetrahedron equation on every consistent (a, c) of the window."""
    cs = list(itertools.product(range(-radius, radius + 1), repeat=6))
    tasks = [(basis, tuple(n), radius, part) for part in _chunks(cs, jobs)]
    return _merge(f"tetra-{basis}-n{tuple(n)}", _run_pool(_tetra_worker, tasks, jobs))


def reflection_sweep(basis="u", radius=1, jobs=1, columns=None):
    """Both sides of the reflection equation on every consistent (a, c) of the window.

    ``columns`` restricts the in-states c (default: the whole window).
    """
    cs = columns if columns is not None else list(itertools.product(range(-radius, radius + 1), repeat=9))
    tasks = [(basis, radius, part) for part in _chunks(list(cs), jobs * 4 if jobs > 1 else 1)]
    return _merge(f"reflection-{basis}", _run_pool(_refl_worker, tasks, jobs))


def enlargement_check(chains, cases, pad=2):
    """For each (a, c): both sides with ranges widened by ``pad`` equal the unpadded values."""
    left, right = chains
    bad = []
    for a, c in cases:
        for ch in (left, right):
            if ch.element(a, c) != ch.element(a, c, pad):
                bad.append((tuple(a), tuple(c)))
                break
    return bad
