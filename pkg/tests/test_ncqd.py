import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtetra.ncqd import (
    IDENTITIES,
    ModularParams,
    QuadratureError,
    check_identity,
    kernel_K_coord,
    kernel_K_mom,
    kernel_R_coord,
    kernel_R_mom,
    phi,
    phi_product,
    residual_inversion,
)

P = ModularParams(0.8)


def test_params_reject_zero_b():
    with pytest.raises(ValueError):
        ModularParams(0)


def test_eta_and_q():
    assert P.eta == pytest.approx((0.8 + 1.25) / 2)
    assert abs(P.q) == pytest.approx(1.0)
    assert P.doubled().b == pytest.approx(0.8 * math.sqrt(2))


def test_phi_at_zero_squared():
    # inversion at z = 0
    want = cmath.exp(-1j * math.pi * (1 - 2 * P.eta**2) / 6)
    assert abs(phi(0.0, P) ** 2 - want) < 1e-10


def test_phi_tends_to_one_on_the_left():
    assert abs(phi(-8.0, P) - 1) < 1e-8


def test_phi_unit_modulus_on_real_line():
    z = np.linspace(-2, 2, 9)
    assert np.allclose(np.abs(phi(z, P)), 1, atol=1e-10)


@pytest.mark.parametrize("z", [0.5 + 0.4j, 1.7 - 0.2j, -0.3 + 0.6j])
def test_extended_matches_direct_inside_strip(z):
    assert abs(phi(z, P) - phi(z, P, method="direct")) < 1e-9 * max(1, abs(phi(z, P)))


def test_direct_refuses_outside_strip():
    with pytest.raises(QuadratureError):
        phi(2j, P, method="direct")


def test_array_shape_preserved():
    z = np.array([[0.1, 0.2], [0.3, 0.1]])
    out = phi(z, P)
    assert out.shape == (2, 2)
    assert out[0, 0] == out[1, 1]


@settings(max_examples=15)
@given(st.floats(-1.5, 1.5), st.floats(-0.3, 0.3))
def test_recursion_in_b(x, y):
    z = complex(x, y)
    b = 0.8
    lhs = phi(z - 0.5j * b, P) / phi(z + 0.5j * b, P)
    rhs = 1 + cmath.exp(2 * math.pi * z * b)
    assert abs(lhs - rhs) < 1e-8 * max(1, abs(rhs))


def test_extension_far_above_strip():
    z = 0.2 + 2.1j
    s = 0.8
    lhs = phi(z - 0.5j * s, P) / phi(z + 0.5j * s, P)
    assert abs(lhs - (1 + cmath.exp(2 * math.pi * z * s))) < 1e-7


def test_product_form_agrees_for_complex_b():
    Q = ModularParams(1 + 0.1j)
    for z in (0.1 + 0.05j, -0.4 - 0.1j):
        assert abs(phi(z, Q) - phi_product(z, Q)) < 1e-7


def test_product_form_rejects_real_b():
    with pytest.raises(ValueError):
        phi_product(0.1, P)


@pytest.mark.parametrize("name", ["inversion", "recursion_b", "recursion_binv", "ram1", "ram2"])
def test_identities_hold(name):
    assert check_identity(name, P) < 1e-6


def test_unknown_identity():
    with pytest.raises(ValueError):
        check_identity("nope", P)
    assert "heine" in IDENTITIES


def test_inversion_negative_control():
    # the same residual, evaluated against phi for a different b, must be large
    z = np.array([0.3 + 0.1j, -0.7 - 0.2j])
    lhs = phi(z, ModularParams(0.6), method="direct") * phi(-z, ModularParams(0.6), method="direct")
    rhs = np.exp(1j * np.pi * z**2 - 1j * np.pi * (1 - 2 * P.eta**2) / 6)
    assert np.max(np.abs(lhs - rhs)) > 1e-3
    assert residual_inversion(P, z) < 1e-9


def test_ram1_negative_control():
    good = check_identity("ram1", P, samples=[dict(v=0.2 - 0.6j, w=-0.15 - 0.25j)])
    assert good < 1e-6
    # feed parameters for a different b into the right side by perturbing w
    from qtetra import ncqd

    eta, K = P.eta, P.K
    lhs = ncqd.line_integral(lambda t: np.exp(2j * np.pi * (-0.15 - 0.25j) * t) / phi(t + 0.2 - 0.6j, P))
    wrong = phi(-0.15 - 0.25j + 1j * eta, P) * K * cmath.exp(-2j * math.pi * (-0.15 - 0.25j) * (0.2 - 0.6j + 1j * eta))
    assert abs(lhs - wrong) / max(abs(lhs), 1) > 1e-2


def test_R_kernel_constraints():
    kv = kernel_R_coord((0.1, 0.2, 0.3), (0.0, 0.1, 0.2), (1.0, 0.5, 0.0), params=P)
    assert kv.constraints == [{"x2": 1, "x'1": -1, "x'3": -1}, {"x'2": 1, "x1": -1, "x3": -1}]
    km = kernel_R_mom((0.1, 0.2, 0.3), (0.0, 0.1, 0.2), (1.0, 0.5, 0.0), params=P)
    assert len(km.constraints) == 2


def test_R_basic_kernel_independent_of_ell_when_xi_zeta_zero():
    a = kernel_R_coord((0.1, 0.2, 0.3), (0.0, 0.1, 0.2), (1.0, 0.5, 0.0), xi=0, zeta=0, params=P)
    b = kernel_R_coord((0.1, 0.2, 0.3), (0.0, 0.1, 0.2), (3.0, -0.5, 2.0), xi=0, zeta=0, params=P)
    assert abs(a.amplitude - b.amplitude) < 1e-12


def test_K_kernels_scale_with_rho():
    x, xp = (0.1, 0.2, -0.1, 0.3), (0.0, 0.15, 0.0, 0.35)
    one = kernel_K_coord(x, xp, P)
    two = kernel_K_coord(x, xp, P, rho=2.5)
    assert abs(two.amplitude / one.amplitude - 2.5) < 1e-12
    assert two.symbols == {"rho_x'": 2.5}
    m1 = kernel_K_mom(x, xp, P)
    m2 = kernel_K_mom(x, xp, P, rho=-1j)
    assert abs(m2.amplitude / m1.amplitude + 1j) < 1e-12
    assert len(m1.constraints) == 2
