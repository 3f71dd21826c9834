import pytest
from hypothesis import given
from hypothesis import strategies as st

from qtetra.qseries import ONE, RatQ, psi_series_coeff
from qtetra.qtorus import (
    ConeSeries,
    QuantumYState,
    TorusElem,
    TorusError,
    ad_psi,
    compose_lattice,
    dilog_factors,
    dilog_product,
    first_difference,
    j1212_closed_form_y5,
    mutate_quantum_y,
    pentagon_check,
    pentagon_sides,
    psi,
    psi_recursion_check,
    psi_truncated,
    tau_map,
    unit,
    verify_ad_tau_decomposition,
    verify_dilog_identity,
    verify_tau_identity,
)
from qtetra.quiver import builtin_quiver, mutate_seed

J121 = builtin_quiver("J121")
J1212 = builtin_quiver("J1212")
qp = RatQ.qpow


def Y(seed, i):
    return TorusElem.monomial(seed, unit(i, seed.n))


def Yinv(seed, i):
    return TorusElem.monomial(seed, tuple(-x for x in unit(i, seed.n)))


@pytest.mark.parametrize("name", ["J121", "J1212", "J123121", "J123123123"])
def test_generator_commutation(name):
    s = builtin_quiver(name)
    for i in range(1, s.n + 1):
        for j in range(1, s.n + 1):
            if s.bhat(i, j).denominator != 1:
                with pytest.raises(TorusError):
                    Y(s, i) * Y(s, j)
                continue
            lhs = Y(s, i) * Y(s, j)
            rhs = (Y(s, j) * Y(s, i)).scale(qp(int(2 * s.bhat(i, j))))
            assert lhs == rhs


small = st.dictionaries(
    st.tuples(*[st.integers(-1, 1)] * 6), st.integers(-3, 3).map(RatQ.const), max_size=3
).map(lambda d: TorusElem(J1212, d))


@given(small, small, small)
def test_product_is_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


def test_tau_on_j121_generators():
    t = tau_map(J121, 4, 1)
    assert t.generator_product_form(2) == (-1, 1)  # Y'_2 -> q^-1 Y_2 Y_4
    assert t.columns[3] == (0, 0, 0, -1, 0)  # Y'_4 -> Y_4^-1
    assert TorusElem.monomial(J121, t.columns[1]) == (Y(J121, 2) * Y(J121, 4)).scale(qp(-1))


def test_tau_composite_on_j1212():
    taus, cur = [], J1212
    for k, eps in ((2, 1), (5, 1), (2, -1)):
        taus.append(tau_map(cur, k, eps))
        cur = mutate_seed(cur, k)
    cols = compose_lattice(taus, 6)
    img = [TorusElem.monomial(J1212, c) for c in cols]
    assert img[3] == (Y(J1212, 4) * Y(J1212, 5)).scale(qp(-1))
    assert img[4] == (Yinv(J1212, 5) * Yinv(J1212, 2)).scale(qp(2))
    assert img[5] == (Y(J1212, 6) * Y(J1212, 2) * Y(J1212, 5)).scale(qp(-3))
    assert cols[:3] == [unit(1, 6), unit(2, 6), unit(3, 6)]


def test_tau_rejects_frozen_vertex():
    with pytest.raises(ValueError):
        tau_map(J121, 1, 1)


def test_psi_truncated_low_order():
    e4 = unit(4, 5)
    got = psi_truncated(J121, e4, 1, 2)
    want = TorusElem(J121, {
        (0,) * 5: ONE,
        e4: -qp(1) / (ONE - qp(2)),
        (0, 0, 0, 2, 0): qp(2) / ((ONE - qp(2)) * (ONE - qp(4))),
    }, 2)
    assert got == want


@given(st.lists(st.integers(0, 2), min_size=5, max_size=5).filter(any), st.integers(1, 2), st.integers(0, 6))
def test_psi_inverse_pair(alpha, base, N):
    a = tuple(alpha)
    assert psi(J121, a, base, 1, N) * psi(J121, a, base, -1, N) == TorusElem.one(J121, N)


@given(st.lists(st.integers(0, 2), min_size=5, max_size=5).filter(any), st.integers(1, 2))
def test_psi_recursion(alpha, base):
    assert psi_recursion_check(J121, tuple(alpha), base, 6)


def test_pentagon():
    assert pentagon_check(J121, unit(2, 5), unit(4, 5), 8)
    assert pentagon_check(J121, unit(2, 5), unit(4, 5), 0)


def test_pentagon_wrong_order_fails():
    lhs, rhs = pentagon_sides(J121, unit(2, 5), unit(4, 5), 4)
    swapped = psi(J121, unit(4, 5), 1, 1, 4) * psi(J121, unit(2, 5), 1, 1, 4)
    assert first_difference(lhs, rhs) is None
    assert first_difference(lhs, swapped) is not None


def test_pentagon_precondition():
    with pytest.raises(TorusError):
        pentagon_check(J121, unit(4, 5), unit(2, 5), 4)


def test_psi_rejects_non_cone_argument():
    with pytest.raises(TorusError):
        psi(J121, (0, -1, 0, 1, 0), 1, 1, 3)


def test_ad_psi_commuting_case():
    on, factors = ad_psi(J121, unit(4, 5), unit(4, 5), 1, 1)
    assert factors == [] and on == unit(4, 5)


def test_ad_psi_on_y1():
    N = 5
    got = ad_psi(J121, unit(1, 5), unit(4, 5), 1, 1, N)
    want = ConeSeries.monomial(J121, unit(1, 5), ONE, N) * ConeSeries.monomial(J121, unit(4, 5), ONE, N).one_plus(qp(1))
    assert got.equals(want)


def test_ad_psi_on_tau_image():
    N = 5
    # the Weyl monomial Y^(e2+e4) is q^-1 Y_2 Y_4
    got = ad_psi(J121, (0, 1, 0, 1, 0), unit(4, 5), 1, 1, N)
    y4inv = ConeSeries.monomial(J121, unit(4, 5), ONE, N).inverse()
    want = ConeSeries.monomial(J121, unit(2, 5), ONE, N) * y4inv.one_plus(qp(1)).inverse()
    assert got.equals(want)


def test_quantum_mutation_first_step_on_j1212():
    N = 5
    st_ = mutate_quantum_y(QuantumYState.start(J1212, N), 2)
    y2inv = ConeSeries.monomial(J1212, unit(2, 6), ONE, N).inverse()
    want = ConeSeries.monomial(J1212, unit(1, 6), ONE, N) * y2inv.one_plus(qp(2)).inverse()
    assert st_.ys[0].equals(want)


@pytest.mark.parametrize("k", [4])
def test_quantum_mutation_involution(k):
    s0 = QuantumYState.start(J121, 6)
    s2 = mutate_quantum_y(mutate_quantum_y(s0, k), k)
    assert all(a.equals(b) for a, b in zip(s0.ys, s2.ys))


def test_lambda_closed_form():
    assert j1212_closed_form_y5(6)


def test_ad_tau_decompositions():
    assert verify_ad_tau_decomposition(J121, [4], N=6)
    assert verify_ad_tau_decomposition(J1212, [2, 5, 2], N=6)
    assert verify_ad_tau_decomposition(J1212, [], N=6)


def test_ad_tau_wrong_sign_rejected():
    with pytest.raises(TorusError):
        verify_ad_tau_decomposition(J1212, [2, 5, 2], signs=[1, 1, 1], N=3)


def test_dilog_identities():
    A = builtin_quiver("J123121")
    assert verify_dilog_identity(A, dilog_factors(A, [8, 4, 7, 8]), dilog_factors(A, [7, 4, 8, 7]), 6)
    C = builtin_quiver("J123123123")
    left = dilog_factors(C, [10, 2, 6, 2, 7, 11, 3, 6, 3, 2, 10, 2, 11])
    right = dilog_factors(C, [11, 3, 7, 3, 2, 6, 2, 11, 10, 3, 6, 3, 7])
    assert len(left) == len(right) == 13
    assert verify_dilog_identity(C, left, right, 5)


def test_dilog_identity_negative_control():
    A = builtin_quiver("J123121")
    left = dilog_factors(A, [8, 4, 7, 8])
    assert verify_dilog_identity(A, left[:1], left[:1], 6)
    assert not verify_dilog_identity(A, left, list(reversed(left)), 4)


def test_dilog_arguments_are_signed_c_vectors():
    A = builtin_quiver("J123121")
    for alpha, base, power in dilog_factors(A, [8, 4, 7, 8]):
        assert min(alpha) >= 0 and power == 1 and base == 1


def test_degree_stability():
    A = builtin_quiver("J123121")
    fs = dilog_factors(A, [8, 4, 7, 8])
    assert dilog_product(A, fs, 6) == dilog_product(A, fs, 4).truncate(4)
    assert dilog_product(A, fs, 4) == dilog_product(A, fs, 6).truncate(4)


def test_tau_identities():
    from qtetra.quiver import transposition

    A = builtin_quiver("J123121")
    assert verify_tau_identity(A, ([8, 4, 7, 8], None, transposition(4, 7, 9)), ([7, 4, 8, 7], None, transposition(4, 8, 9)))
    C = builtin_quiver("J123123123")
    assert verify_tau_identity(C, ([10, 2, 6, 2, 7, 11, 3, 6, 3, 2, 10, 2, 11], None, None),
                               ([11, 3, 7, 3, 2, 6, 2, 11, 10, 3, 6, 3, 7], None, None))
    assert verify_tau_identity(A, ([], None, None), ([], None, None))
    assert not verify_tau_identity(A, ([8, 4, 7, 8], None, None), ([7, 4, 8, 7], None, None))


def test_psi_coefficients_inside_series():
    s = psi(J121, unit(4, 5), 2, 1, 3)
    for n in range(4):
        assert s.terms[(0, 0, 0, n, 0)] == psi_series_coeff(n, False, 2)
