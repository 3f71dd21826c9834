"""Quantum torus T(B), quantum dilogarithm series and mutation as Ad(Psi) o tau.

Basis elements Y^alpha are Weyl ordered: Y^a Y^b = q^{<a,b>} Y^{a+b} with
<a,b> = a^T Bhat b. Hence Y_i Y_j = q^{2 bhat_ij} Y_j Y_i.

Infinite series live in the completion along a positive cone and are kept
up to total degree N (the sum of exponents). An element of the form
``monomial * (1 + higher terms)`` is a :class:`ConeSeries`; quantum
y-variables along a mutation sequence always have this shape because their
leading exponents are sign-coherent c-vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .qseries import ONE, ZERO, RatQ, psi_series_coeff
from .quiver import Seed, SeedError, builtin_quiver, apply_vertex_permutation, mutate_seed, parse_permutation
from .tropical import TropSeed, mutate_tropical


class TorusError(ValueError):
    pass


def unit(i, n):
    return tuple(int(j == i - 1) for j in range(n))


def _add(a, b, k=1):
    return tuple(x + k * y for x, y in zip(a, b))


def _int_pairing(seed, a, b):
    p = seed.pairing(a, b)
    if p.denominator != 1:
        raise TorusError(f"half-integer q-power from <{a},{b}> = {p}")
    return int(p)


def _degree(alpha):
    return sum(alpha)


def _nonneg(alpha):
    return all(x >= 0 for x in alpha)


def _nonpos(alpha):
    return all(x <= 0 for x in alpha)


class TorusElem:
    """Finite (or truncated) linear combination of Weyl-ordered monomials.

    With ``N`` set, every exponent must be nonnegative and products drop
    terms of total degree above N.
    """

    __slots__ = ("seed", "terms", "N")

    def __init__(self, seed, terms=None, N=None):
        self.seed = seed
        self.N = N
        clean = {}
        for a, c in (terms or {}).items():
            c = RatQ.coerce(c)
            if c:
                if N is not None and (not _nonneg(a) or _degree(a) > N):
                    if not _nonneg(a):
                        raise TorusError(f"exponent {a} outside the positive cone")
                    continue
                clean[tuple(a)] = c
        self.terms = clean

    @classmethod
    def one(cls, seed, N=None):
        return cls(seed, {(0,) * seed.n: ONE}, N)

    @classmethod
    def monomial(cls, seed, alpha, coeff=ONE, N=None):
        return cls(seed, {tuple(alpha): coeff}, N)

    def __add__(self, other):
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, ZERO) + c
        return TorusElem(self.seed, out, _minN(self.N, other.N))

    def __sub__(self, other):
        return self + other.scale(RatQ.const(-1))

    def scale(self, c):
        c = RatQ.coerce(c)
        return TorusElem(self.seed, {a: v * c for a, v in self.terms.items()}, self.N)

    def __mul__(self, other):
        if not isinstance(other, TorusElem):
            return self.scale(other)
        N = _minN(self.N, other.N)
        seed = self.seed
        out = {}
        for a, ca in self.terms.items():
            da = _degree(a)
            for b, cb in other.terms.items():
                if N is not None and da + _degree(b) > N:
                    continue
                key = _add(a, b)
                v = (ca * cb).shift(_int_pairing(seed, a, b))
                prev = out.get(key)
                out[key] = v if prev is None else prev + v
        return TorusElem(seed, out, N)

    def conj(self, beta):
        """Y^{-beta} X Y^{beta}: each Y^g picks up q^{2<g, beta>}."""
        seed = self.seed
        return TorusElem(
            seed, {a: c.shift(2 * _int_pairing(seed, a, beta)) for a, c in self.terms.items()}, self.N
        )

    def inverse_series(self):
        """Inverse of a truncated series whose constant term is invertible."""
        if self.N is None:
            raise TorusError("series inverse needs a truncation order")
        zero = (0,) * self.seed.n
        c0 = self.terms.get(zero)
        if not c0:
            raise TorusError("constant term vanishes")
        inv0 = c0.inverse()
        rest = TorusElem(self.seed, {a: -c * inv0 for a, c in self.terms.items() if a != zero}, self.N)
        out = TorusElem.one(self.seed, self.N)
        power = TorusElem.one(self.seed, self.N)
        for _ in range(self.N):
            power = power * rest
            if not power.terms:
                break
            out = out + power
        return out.scale(inv0)

    def __eq__(self, other):
        if not isinstance(other, TorusElem):
            return NotImplemented
        N = _minN(self.N, other.N)
        keys = set(self.terms) | set(other.terms)
        for a in keys:
            if N is not None and _degree(a) > N:
                continue
            if self.terms.get(a, ZERO) != other.terms.get(a, ZERO):
                return False
        return True

    def truncate(self, N):
        return TorusElem(self.seed, self.terms, N)

    def __repr__(self):
        items = sorted(self.terms.items())
        body = " + ".join(f"[{c}]Y^{a}" for a, c in items[:6])
        more = f" + ...({len(items) - 6} more)" if len(items) > 6 else ""
        return f"TorusElem({body}{more})"


def _minN(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def psi(seed, alpha, base=1, power=1, N=6):
    """Psi_{q^base}(Y^alpha)^power truncated at total degree N (alpha >= 0)."""
    alpha = tuple(alpha)
    if not _nonneg(alpha) or not any(alpha):
        raise TorusError(f"argument Y^{alpha} is not in the positive cone")
    terms = {}
    deg = _degree(alpha)
    n = 0
    while n * deg <= N:
        terms[tuple(n * x for x in alpha)] = psi_series_coeff(n, power < 0, base)
        n += 1
    return TorusElem(seed, terms, N)


def psi_truncated(seed, alpha, base, N, inverse=False):
    return psi(seed, alpha, base, -1 if inverse else 1, N)


def product(factors, seed, N):
    out = TorusElem.one(seed, N)
    for f in factors:
        out = out * f
    return out


def pentagon_check(seed, alpha_u, alpha_w, N=6):
    """Psi(U)Psi(W) = Psi(W)Psi(q^{-1}UW)Psi(U) for U = Y^alpha_u, W = Y^alpha_w.

    Requires UW = q^2 WU, i.e. <alpha_u, alpha_w> = 1; then q^{-1}UW = Y^{alpha_u + alpha_w}.
    """
    lhs, rhs = pentagon_sides(seed, alpha_u, alpha_w, N)
    return lhs == rhs


def pentagon_sides(seed, alpha_u, alpha_w, N=6):
    if seed.pairing(alpha_u, alpha_w) != 1:
        raise TorusError("pentagon needs UW = q^2 WU (pairing <U,W> = 1)")
    su = psi(seed, alpha_u, 1, 1, N)
    sw = psi(seed, alpha_w, 1, 1, N)
    suw = psi(seed, _add(alpha_u, alpha_w), 1, 1, N)
    return su * sw, sw * suw * su


def first_difference(a, b):
    """Lowest-degree exponent where two truncated elements differ, as (alpha, a_coeff, b_coeff)."""
    N = _minN(a.N, b.N)
    keys = sorted(set(a.terms) | set(b.terms), key=lambda k: (_degree(k), k))
    for k in keys:
        if N is not None and _degree(k) > N:
            break
        x, y = a.terms.get(k, ZERO), b.terms.get(k, ZERO)
        if x != y:
            return k, x, y
    return None


def psi_recursion_check(seed, alpha, base=1, N=6):
    """Psi(Q^2 U) Psi(U)^{-1} = 1 + Q U with Q = q^base, to degree N."""
    U = psi(seed, alpha, base, 1, N)
    shifted = TorusElem(seed, {a: c.shift(2 * base * (sum(a) // _degree(alpha))) for a, c in U.terms.items()}, N)
    lhs = shifted * psi(seed, alpha, base, -1, N)
    rhs = TorusElem(seed, {(0,) * seed.n: ONE, tuple(alpha): RatQ.qpow(base)}, N)
    return lhs == rhs


# ---------------------------------------------------------------------------
# monomial times cone series


class ConeSeries:
    """coeff * Y^alpha * tail, with tail a truncated positive-cone series starting at 1.

    The constructor moves the tail's constant term into ``coeff``, so the
    triple is canonical and equality is structural up to the truncation order.
    """

    __slots__ = ("coeff", "alpha", "tail")

    def __init__(self, coeff, alpha, tail):
        coeff = RatQ.coerce(coeff)
        c0 = tail.terms.get((0,) * tail.seed.n)
        if not c0:
            raise TorusError("tail must have an invertible constant term")
        if c0 != ONE:
            coeff = coeff * c0
            tail = tail.scale(c0.inverse())
        self.coeff, self.alpha, self.tail = coeff, tuple(alpha), tail

    @property
    def seed(self):
        return self.tail.seed

    @property
    def N(self):
        return self.tail.N

    @classmethod
    def monomial(cls, seed, alpha, coeff=ONE, N=6):
        return cls(coeff, alpha, TorusElem.one(seed, N))

    @classmethod
    def series(cls, tail):
        return cls(ONE, (0,) * tail.seed.n, tail)

    def __mul__(self, other):
        seed = self.seed
        c = (self.coeff * other.coeff).shift(_int_pairing(seed, self.alpha, other.alpha))
        return ConeSeries(c, _add(self.alpha, other.alpha), self.tail.conj(other.alpha) * other.tail)

    def inverse(self):
        # (m T)^{-1} = m^{-1} (m T^{-1} m^{-1})
        neg = tuple(-x for x in self.alpha)
        return ConeSeries(self.coeff.inverse(), neg, self.tail.inverse_series().conj(neg))

    def scale(self, c):
        return ConeSeries(self.coeff * RatQ.coerce(c), self.alpha, self.tail)

    def one_plus(self, c=ONE):
        """1 + c * self, rewritten as monomial times cone series."""
        c = RatQ.coerce(c)
        if any(self.alpha) and _nonneg(self.alpha):
            k = self.coeff * c
            shifted = {}
            for g, v in self.tail.terms.items():
                shifted[_add(self.alpha, g)] = (v * k).shift(_int_pairing(self.seed, self.alpha, g))
            zero = (0,) * self.seed.n
            shifted[zero] = ONE
            return ConeSeries.series(TorusElem(self.seed, shifted, self.N))
        if any(self.alpha) and _nonpos(self.alpha):
            x = self.scale(c)
            return x * x.inverse().one_plus()
        raise TorusError(f"leading exponent {self.alpha} is not sign-coherent")

    def equals(self, other, N=None):
        if self.coeff != other.coeff or self.alpha != other.alpha:
            return False
        a, b = self.tail, other.tail
        if N is not None:
            a, b = a.truncate(N), b.truncate(N)
        return a == b

    def __repr__(self):
        return f"ConeSeries({self.coeff} * Y^{self.alpha} * {self.tail!r})"


# ---------------------------------------------------------------------------
# tau maps


@dataclass(frozen=True)
class TauMap:
    """tau_{k,eps}: T(mu_k B) -> T(B) as a lattice map on Weyl-ordered monomials.

    ``columns[i-1]`` is the exponent of the image of Y'_i. Because the map
    preserves the pairing, no extra q-powers appear in the Weyl basis.
    """

    seed: Seed
    k: int
    eps: int
    columns: tuple

    def image(self, gamma):
        out = [0] * self.seed.n
        for g, col in zip(gamma, self.columns):
            if g:
                for j, c in enumerate(col):
                    out[j] += g * c
        return tuple(out)

    def generator_product_form(self, i):
        """Image of Y'_i as q^s Y_i Y_k^m (or Y_k^{-1} for i = k); returns (s, m)."""
        if i == self.k:
            return 0, -1
        m = self.columns[i - 1][self.k - 1]
        return -m * self.seed.bhat(i, self.k), m


def tau_map(seed, k, eps):
    if k in seed.frozen:
        raise SeedError(f"vertex {k} is frozen")
    n = seed.n
    cols = []
    for i in range(1, n + 1):
        if i == k:
            cols.append(tuple(-x for x in unit(k, n)))
        else:
            m = max(eps * seed.b(i, k), 0)
            cols.append(_add(unit(i, n), unit(k, n), int(m)))
    return TauMap(seed, k, eps, tuple(cols))


def compose_lattice(maps, n):
    """Column list of tau_1 o tau_2 o ... applied to the unit vectors."""
    cols = [unit(i, n) for i in range(1, n + 1)]
    for t in reversed(maps):
        cols = [t.image(c) for c in cols]
    return cols


def ordered_qpower(seed, alpha, order=None):
    """s with Y^alpha = q^s * prod over ``order`` of Y_i^{alpha_i}."""
    order = order or list(range(1, seed.n + 1))
    s = Fraction(0)
    for x, i in enumerate(order):
        for j in order[x + 1:]:
            s -= alpha[i - 1] * alpha[j - 1] * seed.bhat(i, j)
    return s


def ad_psi(seed, on_alpha, arg_alpha, base, sign, N=None):
    """Ad(Psi_{q^base}(Y^arg)^sign) applied to Y^on, as an exact finite product.

    Returns (on_alpha, factors) meaning Y^on * prod (1 + c Y^arg)^power, with
    factors a list of (c, power). With N given, returns the expanded ConeSeries.
    """
    m = seed.pairing(arg_alpha, on_alpha) / base
    if m.denominator != 1:
        raise TorusError("commutation exponent is not a multiple of the base")
    m = int(m)
    factors = []
    for j in range(1, abs(m) + 1):
        if m > 0:
            factors.append((RatQ.qpow(base * (2 * j - 1)), sign))
        else:
            factors.append((RatQ.qpow(-base * (2 * j - 1)), -sign))
    if N is None:
        return tuple(on_alpha), factors
    out = ConeSeries.monomial(seed, on_alpha, ONE, N)
    u = ConeSeries.monomial(seed, arg_alpha, ONE, N)
    for c, p in factors:
        f = u.one_plus(c)
        out = out * (f if p > 0 else f.inverse())
    return out


def adjoint(series, x):
    """series * x * series^{-1} for ConeSeries values."""
    return series * x * series.inverse()


# ---------------------------------------------------------------------------
# quantum y-variables along a mutation sequence


@dataclass(frozen=True)
class QuantumYState:
    """Current seed and each quantum y-variable written in the initial torus."""

    initial: Seed
    trop: TropSeed
    ys: tuple
    N: int

    @classmethod
    def start(cls, seed, N=6):
        ys = tuple(ConeSeries.monomial(seed, unit(i, seed.n), ONE, N) for i in range(1, seed.n + 1))
        return cls(seed, TropSeed.initial(seed), ys, N)

    @property
    def seed(self):
        return self.trop.seed


def mutate_quantum_y(state, k):
    """Y'_k = Y_k^{-1}; Y'_i = Y_i prod_{j=1}^{|b_ik|} (1 + q_k^{2j-1} Y_k^{-sgn b_ik})^{-sgn b_ik}."""
    seed = state.seed
    dk = seed.d[k - 1]
    yk = state.ys[k - 1]
    yk_inv = yk.inverse()
    new = []
    for i in range(1, seed.n + 1):
        y = state.ys[i - 1]
        if i == k:
            new.append(yk_inv)
            continue
        b = seed.b(i, k)
        if b == 0:
            new.append(y)
            continue
        if b.denominator != 1:
            raise SeedError("half-integer b_ik at a mutable vertex")
        s = 1 if b > 0 else -1
        arg = yk_inv if s > 0 else yk
        for j in range(1, int(abs(b)) + 1):
            f = arg.one_plus(RatQ.qpow(dk * (2 * j - 1)))
            y = y * (f.inverse() if s > 0 else f)
        new.append(y)
    return QuantumYState(state.initial, mutate_tropical(state.trop, k), tuple(new), state.N)


def dilog_factors(seed, sequence):
    """Psi factors (alpha, base, power) attached to a mutation sequence.

    Step r contributes Psi_{q_k}(Y^{eps c_k})^{eps} with c_k the c-vector and
    eps its tropical sign at that step.
    """
    t = TropSeed.initial(seed)
    out = []
    for k in sequence:
        eps = t.sign(k)
        out.append((tuple(eps * x for x in t.c(k)), seed.d[k - 1], eps))
        t = mutate_tropical(t, k)
    return out


def dilog_product(seed, factors, N=6):
    out = TorusElem.one(seed, N)
    for alpha, base, power in factors:
        out = out * psi(seed, alpha, base, power, N)
    return out


def verify_dilog_identity(seed, lhs, rhs, N=6):
    return dilog_product(seed, lhs, N) == dilog_product(seed, rhs, N)


def verify_ad_tau_decomposition(seed, sequence, signs=None, N=6, report=None):
    """Compare iterated mutation formulas with Ad(Psi...) tau... at every step.

    ``signs`` are the Psi/tau signs; the default (and the only choice that keeps
    every Psi argument in the positive cone) is the tropical sign sequence.
    """
    state = QuantumYState.start(seed, N)
    trop = TropSeed.initial(seed)
    cur = seed
    taus, psis = [], []
    ok = True
    for step, k in enumerate(sequence):
        eps = trop.sign(k)
        delta = eps if signs is None else signs[step]
        if delta != eps:
            raise TorusError(f"sign {delta} at step {step + 1} leaves the positive cone")
        beta = tuple(delta * x for x in trop.c(k))
        psis.append(ConeSeries.series(psi(seed, beta, seed.d[k - 1], delta, N)))
        taus.append(tau_map(cur, k, delta))
        trop = mutate_tropical(trop, k)
        cur = mutate_seed(cur, k)
        state = mutate_quantum_y(state, k)
        cols = compose_lattice(taus, seed.n)
        for i in range(1, seed.n + 1):
            x = ConeSeries.monomial(seed, cols[i - 1], ONE, N)
            for p in reversed(psis):
                x = adjoint(p, x)
            same = x.equals(state.ys[i - 1])
            if report is not None:
                report.append((step + 1, i, same))
            ok &= same
    return ok


def verify_tau_identity(seed, lhs, rhs):
    """Compare composites tau_{i1,e1} ... tau_{it,et} sigma for two mutation sequences.

    ``lhs``/``rhs`` are (sequence, signs or None, permutation or None). Signs
    default to the tropical ones. The composites must agree as lattice maps and
    the two final seeds (after permutation) must coincide.
    """
    finals, maps = [], []
    for seq, signs, perm in (lhs, rhs):
        trop = TropSeed.initial(seed)
        cur = seed
        taus = []
        for step, k in enumerate(seq):
            eps = trop.sign(k) if signs is None else signs[step]
            taus.append(tau_map(cur, k, eps))
            trop = mutate_tropical(trop, k)
            cur = mutate_seed(cur, k)
        sigma = parse_permutation(perm, seed.n)
        finals.append(apply_vertex_permutation(cur, sigma))
        inv = [0] * seed.n
        for i, s in enumerate(sigma, start=1):
            inv[s - 1] = i
        cols = compose_lattice(taus, seed.n)
        maps.append([cols[inv[i] - 1] for i in range(seed.n)])
    return finals[0] == finals[1] and maps[0] == maps[1]


def j1212_closed_form_y5(N=6):
    """Y_5 after mu_2 mu_5 mu_2 on J1212 against q^2 Y_5^-1 Y_2^-1 Lambda.

    Lambda = 1 + (q + q^3) Y_5 + q^4 Y_5^2 (1 + q^2 Y_2), products taken in
    the torus (so Y_5^2 Y_2 carries its own ordering q-power).
    """
    seed = builtin_quiver("J1212")
    n = seed.n
    state = QuantumYState.start(seed, N)
    for k in (2, 5, 2):
        state = mutate_quantum_y(state, k)
    y5 = TorusElem.monomial(seed, unit(5, n), ONE, N)
    y2 = TorusElem.monomial(seed, unit(2, n), ONE, N)
    lam = (TorusElem.one(seed, N) + y5.scale(RatQ.qpow(1) + RatQ.qpow(3))
           + (y5 * y5).scale(RatQ.qpow(4)) + (y5 * y5 * y2).scale(RatQ.qpow(6)))
    mono = lambda i: ConeSeries.monomial(seed, unit(i, n), ONE, N)
    expected = (mono(5).inverse() * mono(2).inverse()).scale(RatQ.qpow(2)) * ConeSeries.series(lam)
    return expected.equals(state.ys[4])
