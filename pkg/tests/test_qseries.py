from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from qtetra.qseries import (
    ONE,
    ZERO,
    LaurentQ,
    RatQ,
    inv_qfactorial,
    psi_series_coeff,
    qbinomial_duality_sides,
    qpochhammer,
    verify_qbinomial_duality,
)

q = sp.Symbol("q")
Q0 = Fraction(2, 7)  # evaluation point for comparisons with sympy


def sym_poch(z, base, n):
    if n >= 0:
        return sp.Mul(*[1 - q ** (z + k * base) for k in range(n)])
    return 1 / sp.Mul(*[1 - q ** (z - k * base) for k in range(1, -n + 1)])


def sym_duality(r, s, t):
    def inv_fact(base, n):
        return 0 if n < 0 else 1 / sym_poch(base, base, n)

    total = sum(
        (-1) ** n * q ** (n * (n + 1 + 2 * s)) * inv_fact(2, n) * inv_fact(2, t - n) * inv_fact(2, n + r)
        for n in range(max(0, -r), t + 1)
    )
    return total * inv_fact(2, s + t)


def same(ratq, expr):
    return ratq.evaluate(Q0) == sp.Rational(expr.subs(q, sp.Rational(Q0.numerator, Q0.denominator)))


def test_pochhammer_examples():
    assert qpochhammer(1, 1, 0) == ONE
    assert qpochhammer(2, 2, 2) == (ONE - RatQ.qpow(2)) * (ONE - RatQ.qpow(4))
    assert qpochhammer(2, 1, -1) == (ONE - RatQ.qpow(1)).inverse()


def test_pochhammer_pole_raises():
    with pytest.raises(ZeroDivisionError):
        qpochhammer(1, 1, -1)


def test_inverse_factorial_examples():
    assert inv_qfactorial(2, 1) == (ONE - RatQ.qpow(2)).inverse()
    assert inv_qfactorial(2, -3) == ZERO
    assert inv_qfactorial(4, 0) == ONE


def test_psi_coefficients():
    assert psi_series_coeff(0, False, 1) == ONE
    assert psi_series_coeff(1, False, 1) == RatQ.qpow(1, -1) / (ONE - RatQ.qpow(2))
    assert psi_series_coeff(2, True, 1) == RatQ.qpow(4) / ((ONE - RatQ.qpow(2)) * (ONE - RatQ.qpow(4)))


def test_psi_times_inverse_is_one():
    # coefficients of Psi(U) Psi(U)^{-1} in U vanish beyond degree 0
    for base in (1, 2):
        for m in range(7):
            total = sum((psi_series_coeff(k, False, base) * psi_series_coeff(m - k, True, base) for k in range(m + 1)), ZERO)
            assert total == (ONE if m == 0 else ZERO)


@given(st.integers(1, 3), st.integers(-4, 6), st.integers(-3, 5))
def test_pochhammer_matches_sympy(base, z, n):
    try:
        ours = qpochhammer(z, base, n)
    except ZeroDivisionError:
        return
    assert same(ours, sym_poch(z, base, n))


@given(st.integers(0, 6), st.booleans(), st.integers(1, 3))
def test_psi_coeff_matches_sympy(n, inverse, base):
    Qb = q**base
    head = Qb ** (n * n) if inverse else (-Qb) ** n
    assert same(psi_series_coeff(n, inverse, base), head / sym_poch(2 * base, 2 * base, n))


@pytest.mark.parametrize("rst", [(0, 1, 1), (3, 5, 4)])
def test_duality_derived_examples(rst):
    lhs, rhs = qbinomial_duality_sides(*rst)
    assert lhs == rhs
    oracle_l, oracle_r = sym_duality(*rst), sym_duality(rst[1], rst[0], rst[2])
    assert sp.simplify(oracle_l - oracle_r) == 0
    assert same(lhs, oracle_l)


@given(st.integers(-3, 8), st.integers(0, 6))
def test_duality_trivial_diagonal(r, t):
    assert verify_qbinomial_duality(r, r, t)


@given(st.integers(-3, 8), st.integers(-3, 8), st.integers(-3, 8))
def test_duality_random(r, s, t):
    assert verify_qbinomial_duality(r, s, t)


def test_duality_negative_control():
    lhs, _ = qbinomial_duality_sides(1, 2, 2)
    _, rhs = qbinomial_duality_sides(1, 3, 2)
    assert lhs != rhs


laurent = st.dictionaries(st.integers(-5, 5), st.integers(-4, 4), max_size=4).map(LaurentQ)
ratq = st.tuples(laurent, laurent).filter(lambda p: not p[1].is_zero()).map(lambda p: p[0].to_ratq() / p[1].to_ratq())


@given(ratq, ratq, ratq)
def test_ratq_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a) == ZERO
    if a:
        assert a * a.inverse() == ONE


@given(ratq, ratq)
def test_evaluation_is_a_homomorphism(a, b):
    x = Fraction(3, 5)
    try:
        assert (a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x)
        assert (a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x)
    except ZeroDivisionError:
        pass


@given(ratq, st.integers(-5, 5))
def test_shift_is_multiplication_by_q_power(a, k):
    assert a.shift(k) == a * RatQ.qpow(k)
