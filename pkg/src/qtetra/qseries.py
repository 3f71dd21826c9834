"""Exact Laurent polynomials and rational functions in a single variable q.

Both types are thin immutable wrappers around ``flint.fmpq_poly``. A value is
stored as ``q**e * N(q) / D(q)`` with ``N(0) != 0``, ``D(0) == 1`` and
``gcd(N, D) == 1``. That form is canonical, so structural equality is
mathematical equality.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import flint

_P = flint.fmpq_poly
_ONE = _P([1])
_ZERO = _P([])


def _valuation(p):
    i = 0
    while p[i] == 0:
        i += 1
    return i


def _to_fraction(c):
    return Fraction(int(c.p), int(c.q))


def _as_fmpq(c):
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    return flint.fmpq(c)


class RatQ:
    """Element of Q(q), kept in reduced canonical form."""

    __slots__ = ("e", "n", "d")

    def __init__(self, e=0, n=_ZERO, d=_ONE, _raw=False):
        if _raw:
            self.e, self.n, self.d = e, n, d
            return
        if d.is_zero():
            raise ZeroDivisionError("zero denominator")
        if n.is_zero():
            self.e, self.n, self.d = 0, _ZERO, _ONE
            return
        if not d.is_one():
            g = n.gcd(d)
            if not g.is_one():
                n = n // g
                d = d // g
        vd = _valuation(d)
        if vd:
            d = d.right_shift(vd)
            e -= vd
        vn = _valuation(n)
        if vn:
            n = n.right_shift(vn)
            e += vn
        c = d[0]
        if c != 1:
            n = n / c
            d = d / c
        self.e, self.n, self.d = e, n, d

    # -- construction -------------------------------------------------------
    @classmethod
    def const(cls, c):
        return cls(0, _P([_as_fmpq(c)]))

    @classmethod
    def qpow(cls, k, c=1):
        """c * q**k."""
        if c == 0:
            return ZERO
        return cls(k, _P([_as_fmpq(c)]), _ONE, _raw=True)

    @classmethod
    def from_coeffs(cls, coeffs, den=None):
        """Build from ``{exponent: coeff}`` dicts for numerator (and denominator)."""
        num = LaurentQ(coeffs)
        if den is None:
            return num.to_ratq()
        return num.to_ratq() / LaurentQ(den).to_ratq()

    @classmethod
    def coerce(cls, x):
        if isinstance(x, RatQ):
            return x
        if isinstance(x, LaurentQ):
            return x.to_ratq()
        if isinstance(x, (int, Rational)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RatQ")

    # -- predicates ---------------------------------------------------------
    def is_zero(self):
        return self.n.is_zero()

    def is_laurent(self):
        return self.d.is_one()

    def __bool__(self):
        return not self.n.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RatQ):
            try:
                other = RatQ.coerce(other)
            except TypeError:
                return NotImplemented
        return self.e == other.e and self.n == other.n and self.d == other.d

    def __hash__(self):
        return hash((self.e, str(self.n), str(self.d)))

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, RatQ):
            other = RatQ.coerce(other)
        if self.n.is_zero():
            return other
        if other.n.is_zero():
            return self
        e = min(self.e, other.e)
        a = self.n.left_shift(self.e - e) if self.e != e else self.n
        b = other.n.left_shift(other.e - e) if other.e != e else other.n
        d1, d2 = self.d, other.d
        if d1 == d2:
            return RatQ(e, a + b, d1)
        if d1.is_one():
            return RatQ(e, a * d2 + b, d2)
        if d2.is_one():
            return RatQ(e, a + b * d1, d1)
        g = d1.gcd(d2)
        if g.is_one():
            return RatQ(e, a * d2 + b * d1, d1 * d2)
        d2g = d2 // g
        return RatQ(e, a * d2g + b * (d1 // g), d1 * d2g)

    __radd__ = __add__

    def __neg__(self):
        return RatQ(self.e, -self.n, self.d, _raw=True)

    def __sub__(self, other):
        if not isinstance(other, RatQ):
            other = RatQ.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return RatQ.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RatQ):
            other = RatQ.coerce(other)
        if self.n.is_zero() or other.n.is_zero():
            return ZERO
        n1, d1, n2, d2 = self.n, self.d, other.n, other.d
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 // g, d2 // g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 // g, d1 // g
        n, d = n1 * n2, d1 * d2
        c = d[0]
        if c != 1:
            n, d = n / c, d / c
        return RatQ(self.e + other.e, n, d, _raw=True)

    __rmul__ = __mul__

    def inverse(self):
        if self.n.is_zero():
            raise ZeroDivisionError("inverse of zero")
        c = self.n[0]
        return RatQ(-self.e, self.d / c, self.n / c, _raw=True)

    def __truediv__(self, other):
        return self * RatQ.coerce(other).inverse()

    def __rtruediv__(self, other):
        return RatQ.coerce(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k):
        """Multiply by q**k."""
        if self.n.is_zero():
            return self
        return RatQ(self.e + k, self.n, self.d, _raw=True)

    # -- views --------------------------------------------------------------
    @property
    def num(self):
        return LaurentQ._from_poly(self.n, self.e)

    @property
    def den(self):
        return LaurentQ._from_poly(self.d, 0)

    def to_laurent(self):
        if not self.d.is_one():
            raise ValueError("not a Laurent polynomial")
        return self.num

    def evaluate(self, x):
        """Numeric value at q = x (x may be float, complex or Fraction)."""
        return self.num.evaluate(x) / self.den.evaluate(x)

    def __repr__(self):
        return f"RatQ({self})"

    def __str__(self):
        if self.d.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"


class LaurentQ:
    """Finite sum of c_k q^k with rational coefficients."""

    __slots__ = ("v", "p")

    def __init__(self, coeffs=None):
        coeffs = {k: Fraction(c) for k, c in (coeffs or {}).items() if c != 0}
        if not coeffs:
            self.v, self.p = 0, _ZERO
            return
        lo, hi = min(coeffs), max(coeffs)
        self.v = lo
        self.p = _P([_as_fmpq(coeffs.get(k, 0)) for k in range(lo, hi + 1)])

    @classmethod
    def _from_poly(cls, p, shift):
        out = cls.__new__(cls)
        if p.is_zero():
            out.v, out.p = 0, _ZERO
            return out
        k = _valuation(p)
        out.v, out.p = shift + k, p.right_shift(k) if k else p
        return out

    @classmethod
    def monomial(cls, k, c=1):
        return cls({k: c})

    @property
    def coeffs(self):
        return {self.v + i: _to_fraction(c) for i, c in enumerate(self.p.coeffs()) if c != 0}

    def is_zero(self):
        return self.p.is_zero()

    def degree_range(self):
        if self.is_zero():
            return None
        return self.v, self.v + self.p.degree()

    def to_ratq(self):
        return RatQ(self.v, self.p, _ONE)

    def _align(self, other):
        if not isinstance(other, LaurentQ):
            if isinstance(other, (int, Rational)):
                other = LaurentQ({0: other})
            else:
                return None
        return other

    def __eq__(self, other):
        other = self._align(other)
        if other is None:
            return NotImplemented
        return self.v == other.v and self.p == other.p

    def __hash__(self):
        return hash((self.v, str(self.p)))

    def __add__(self, other):
        other = self._align(other)
        if other is None:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        v = min(self.v, other.v)
        return LaurentQ._from_poly(self.p.left_shift(self.v - v) + other.p.left_shift(other.v - v), v)

    __radd__ = __add__

    def __neg__(self):
        return LaurentQ._from_poly(-self.p, self.v)

    def __sub__(self, other):
        other = self._align(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._align(other)
        if other is None:
            return NotImplemented
        return LaurentQ._from_poly(self.p * other.p, self.v + other.v)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power of a Laurent polynomial; use RatQ")
        out = LaurentQ({0: 1})
        for _ in range(k):
            out = out * self
        return out

    def evaluate(self, x):
        total = 0
        for k, c in self.coeffs.items():
            total += (c if isinstance(x, Fraction) else float(c)) * x**k
        return total

    def __repr__(self):
        return f"LaurentQ({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in sorted(self.coeffs.items()):
            if k == 0:
                mono = ""
            elif k == 1:
                mono = "q"
            else:
                mono = f"q^{k}"
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


ZERO = RatQ()
ONE = RatQ.const(1)


@lru_cache(maxsize=None)
def qpochhammer(z_power, base, n):
    """(q^z_power; q^base)_n, including the negative-n convention.

    For n < 0 this is 1 / prod_{k=1}^{|n|} (1 - q^(z_power - k*base)); a zero
    factor there is a pole and raises ZeroDivisionError.
    """
    out = ONE
    if n >= 0:
        for k in range(n):
            m = z_power + k * base
            if m == 0:
                return ZERO
            out = out * (ONE - RatQ.qpow(m))
        return out
    for k in range(1, -n + 1):
        m = z_power - k * base
        if m == 0:
            raise ZeroDivisionError(f"pole in (q^{z_power}; q^{base})_{n}")
        out = out * (ONE - RatQ.qpow(m))
    return out.inverse()


@lru_cache(maxsize=None)
def inv_qfactorial(base, n):
    """1 / (q^base; q^base)_n, which vanishes for n < 0."""
    if n < 0:
        return ZERO
    return qpochhammer(base, base, n).inverse()


@lru_cache(maxsize=None)
def psi_series_coeff(n, inverse=False, base=1):
    """Coefficient of U^n in Psi_{q^base}(U) or in its inverse.

    Psi_Q(U) = sum_n (-Q)^n / (Q^2; Q^2)_n U^n and
    Psi_Q(U)^{-1} = sum_n Q^(n^2) / (Q^2; Q^2)_n U^n.
    """
    if n < 0:
        return ZERO
    if inverse:
        head = RatQ.qpow(base * n * n)
    else:
        head = RatQ.qpow(base * n, (-1) ** n)
    return head * inv_qfactorial(2 * base, n)


def qbinomial_duality_sides(r, s, t):
    """Both sides of the r <-> s symmetric sum.

    S(r, s, t) = 1/(q^2)_{s+t} * sum_n (-1)^n q^{n(n+1+2s)} /
    ((q^2)_n (q^2)_{t-n} (q^2)_{n+r}); the function returns (S(r,s,t), S(s,r,t)).
    """
    return _duality_sum(r, s, t), _duality_sum(s, r, t)


def _duality_sum(r, s, t):
    total = ZERO
    for n in range(max(0, -r), t + 1):
        term = inv_qfactorial(2, n) * inv_qfactorial(2, t - n) * inv_qfactorial(2, n + r)
        if term:
            total = total + term.shift(n * (n + 1 + 2 * s)) * (-1) ** n
    return total * inv_qfactorial(2, s + t)


def verify_qbinomial_duality(r, s, t):
    lhs, rhs = qbinomial_duality_sides(r, s, t)
    return lhs == rhs
