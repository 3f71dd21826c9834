"""Noncompact quantum dilogarithm phi(z) and the modular-double kernels.

phi(z) = exp( (1/4) int e^{-2izw} / (sinh(wb) sinh(w/b)) dw/w ) with the
contour passing above w = 0. The integral is taken on the straight line
Im w = eps, which is equivalent to the indented real line because no pole
lies in between, and evaluated by the trapezoid rule. Outside a central strip
phi is continued by the difference equation, and for Re z > 1 by the
reflection formula phi(z) phi(-z) = exp(i pi z^2 - i pi (1 - 2 eta^2) / 6).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class ModularParams:
    b: complex = 0.7

    def __post_init__(self):
        if self.b == 0:
            raise ValueError("b must be nonzero")
        if self.eta.real <= 0:
            raise ValueError("need Re(eta) > 0")

    @property
    def eta(self):
        b = complex(self.b)
        return (b + 1 / b) / 2

    @property
    def eta_tilde(self):
        b = complex(self.b)
        return (2 * b + 1 / b) / 2

    @property
    def q(self):
        return cmath.exp(1j * math.pi * complex(self.b) ** 2)

    @property
    def qbar(self):
        return cmath.exp(-1j * math.pi / complex(self.b) ** 2)

    @property
    def K(self):
        return cmath.exp(-1j * math.pi * (4 * self.eta**2 + 1) / 12)

    def doubled(self):
        """Parameters for phi_tilde(z) = phi_{sqrt(2) b}(z / sqrt(2))."""
        return ModularParams(complex(self.b) * math.sqrt(2))


@dataclass(frozen=True)
class Contour:
    """Trapezoid grid on Im w = eps for the defining integral."""

    h: float = 0.02
    tail: float = 1e-17


def _line_shift(b):
    b = complex(b)
    return 0.5 * math.pi * min((1j * b).imag, (1j / b).imag)


def _phi_direct(z, params, contour=Contour()):
    """Defining integral on the shifted line; needs |Im z| < Re(eta)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    b = complex(params.b)
    eta = params.eta.real
    margin = eta - np.max(np.abs(z.imag)) if z.size else eta
    if margin <= 0:
        raise QuadratureError("direct quadrature needs |Im z| < Re(eta)")
    eps = _line_shift(b)
    # the integrand decays like exp(-2 margin |t|) times exp(2 |Re z| eps)
    grow = 2 * eps * max(0.0, float(np.max(z.real)) if z.size else 0.0)
    T = (grow + math.log(1 / contour.tail) + 5) / (2 * margin)
    n = int(math.ceil(T / contour.h))
    t = np.arange(-n, n + 1) * contour.h
    w = t + 1j * eps
    base = 1 / (np.sinh(w * b) * np.sinh(w / b) * w)
    out = np.empty(z.shape, dtype=complex)
    chunk = max(1, 2_000_000 // len(w))
    for i in range(0, z.size, chunk):
        zz = z[i:i + chunk, None]
        vals = np.exp(-2j * zz * w[None, :]) * base[None, :]
        out[i:i + chunk] = vals.sum(axis=1) * contour.h
    return np.exp(out / 4)


def _step(params):
    b = complex(params.b)
    return b if abs(b) <= 1 else 1 / b


def phi(z, params=ModularParams(), contour=Contour(), method="auto"):
    """phi(z) for scalar or array z.

    ``method="direct"`` uses only the defining integral (|Im z| < Re eta).
    The default also uses the difference equation to bring Im z near 0 and
    the reflection formula for Re z > 1.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if method == "direct":
        out = _phi_direct(z, params, contour)
        return out[0] if scalar else out
    uniq, inv = np.unique(z, return_inverse=True)
    vals = _phi_extended(uniq, params, contour)
    out = vals[inv].reshape(z.shape)
    return out[0] if scalar else out


def _phi_extended(z, params, contour):
    eta = params.eta
    s = _step(params)
    lim = 0.5 * eta.real
    factor = np.ones(z.shape, dtype=complex)
    zz = z.copy()
    # phi(z) = phi(z - i s) / (1 + e^{2 pi (z - i s/2) s})  (moving down)
    # phi(z) = phi(z + i s) (1 + e^{2 pi (z + i s/2) s})    (moving up)
    for _ in range(200):
        up = zz.imag > lim
        down = zz.imag < -lim
        if not (up.any() or down.any()):
            break
        if up.any():
            factor[up] /= 1 + np.exp(2 * np.pi * (zz[up] - 0.5j * s) * s)
            zz[up] -= 1j * s
        if down.any():
            factor[down] *= 1 + np.exp(2 * np.pi * (zz[down] + 0.5j * s) * s)
            zz[down] += 1j * s
    else:
        raise QuadratureError("difference equation did not reach the strip")
    right = zz.real > 1
    vals = np.empty(zz.shape, dtype=complex)
    if (~right).any():
        vals[~right] = _phi_direct(zz[~right], params, contour)
    if right.any():
        zr = zz[right]
        const = np.exp(1j * np.pi * zr**2 - 1j * np.pi * (1 - 2 * eta**2) / 6)
        vals[right] = const / _phi_direct(-zr, params, contour)
    return factor * vals


def phi_product(z, params, terms=400):
    """Infinite-product form, valid when |q| < 1 and |qbar| < 1 (complex b)."""
    q, qb = params.q, params.qbar
    if abs(q) >= 1 or abs(qb) >= 1:
        raise ValueError("product form needs |q| < 1 and |qbar| < 1")
    b, eta = complex(params.b), params.eta
    x = cmath.exp(2 * math.pi * (z + 1j * eta) * b)
    y = cmath.exp(2 * math.pi * (z - 1j * eta) / b)
    k = np.arange(terms)
    num = np.prod(1 - x * q ** (2 * k))
    den = np.prod(1 - y * qb ** (2 * k))
    return num / den


# ---------------------------------------------------------------------------
# quadrature over t


def line_integral(f, shift=0.0, h=0.02, tail=1e-15, t_max=400.0):
    """int f(t) dt along Im t = shift; the window grows until both ends are negligible."""
    T = 10.0
    while True:
        n = int(math.ceil(T / h))
        t = np.arange(-n, n + 1) * h + 1j * shift
        vals = f(t)
        scale = max(np.max(np.abs(vals)), 1e-300)
        edge = max(np.max(np.abs(vals[:20])), np.max(np.abs(vals[-20:])))
        if edge < tail * scale:
            return vals.sum() * h
        if T >= t_max:
            raise QuadratureError(f"integrand not decayed at |t| = {T} (edge/max = {edge / scale:.2e})")
        T *= 1.6


# ---------------------------------------------------------------------------
# functional equations

DEFAULT_SAMPLES = {
    "ramanujan_full": [
        dict(u=0.2 + 0.5j, v=-0.3 - 0.1j, w=0.25 - 0.3j),
        dict(u=-0.4 + 0.3j, v=0.1 - 0.2j, w=-0.1 - 0.2j),
    ],
    "ram1": [
        dict(v=0.2 - 0.6j, w=-0.15 - 0.25j),
        dict(v=-0.5 - 0.5j, w=0.3 - 0.2j),
        dict(v=0.1 - 0.4j, w=0.1 - 0.1j),
    ],
    "ram2": [
        dict(u=0.1 + 0.6j, w=0.3 - 0.3j),
        dict(u=-0.3 + 0.4j, w=-0.2 - 0.2j),
    ],
    "heine": [
        dict(a=0.1 + 0.4j, hb=-0.2 + 0.3j, c=0.4 + 0.1j, d=0.2 - 0.3j, shift=-0.15),
        dict(a=-0.3 + 0.3j, hb=0.25 + 0.35j, c=0.1 + 0.05j, d=-0.1 - 0.35j, shift=-0.12),
    ],
}


def _strip_points(params, count, seed=0):
    rng = np.random.default_rng(seed)
    lim = 0.45 * params.eta.real
    return rng.uniform(-2, 2, count) + 1j * rng.uniform(-lim, lim, count)


def residual_inversion(params, points):
    z = np.asarray(points, dtype=complex)
    lhs = phi(z, params, method="direct") * phi(-z, params, method="direct")
    rhs = np.exp(1j * np.pi * z**2 - 1j * np.pi * (1 - 2 * params.eta**2) / 6)
    return _rel(lhs, rhs)


def _rel(lhs, rhs):
    return float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1.0)))


def residual_recursion(params, points, which="b"):
    b = complex(params.b)
    s = b if which == "b" else 1 / b
    z = np.asarray(points, dtype=complex)
    lo = phi(z - 0.5j * s, params, method="direct")
    hi = phi(z + 0.5j * s, params, method="direct")
    return _rel(lo / hi, 1 + np.exp(2 * np.pi * z * s))


def residual_ramanujan_full(params, u, v, w):
    eta, K = params.eta, params.K
    lhs = line_integral(lambda t: phi(t + u, params) / phi(t + v, params) * np.exp(2j * np.pi * w * t))
    r1 = (
        phi(u - v - 1j * eta, params) * phi(w + 1j * eta, params)
        / (K * phi(u - v + w - 1j * eta, params)) * cmath.exp(-2j * math.pi * w * (v + 1j * eta))
    )
    r2 = (
        K * phi(v - u - w + 1j * eta, params)
        / (phi(v - u + 1j * eta, params) * phi(-w - 1j * eta, params))
        * cmath.exp(-2j * math.pi * w * (u - 1j * eta))
    )
    return max(abs(lhs - r1), abs(lhs - r2)) / max(abs(lhs), 1.0)


def residual_ram1(params, v, w):
    eta, K = params.eta, params.K
    lhs = line_integral(lambda t: np.exp(2j * np.pi * w * t) / phi(t + v, params))
    rhs = phi(w + 1j * eta, params) / K * cmath.exp(-2j * math.pi * w * (v + 1j * eta))
    return abs(lhs - rhs) / max(abs(lhs), 1.0)


def residual_ram2(params, u, w):
    eta, K = params.eta, params.K
    lhs = line_integral(lambda t: phi(t + u, params) * np.exp(2j * np.pi * w * t))
    rhs = K / phi(-w - 1j * eta, params) * cmath.exp(-2j * math.pi * w * (u - 1j * eta))
    return abs(lhs - rhs) / max(abs(lhs), 1.0)


def residual_heine(params, a, hb, c, d, shift):
    """Right-hand integral runs on Im t = shift, below the pole of phi(t + i eta) at t = 0."""
    eta = params.eta
    lhs = line_integral(
        lambda t: phi(t + a, params) * phi(t + hb, params) * np.exp(2j * np.pi * t * d) / phi(t + c, params)
    )
    inner = line_integral(
        lambda t: phi(t + 1j * eta, params) * np.exp(2j * np.pi * t * (hb - c - 2j * eta))
        / (phi(t - d - 1j * eta, params) * phi(t + a - c - 1j * eta, params)),
        shift=shift,
    )
    rhs = cmath.exp(-2j * math.pi * (hb - 1j * eta) * d) * phi(a - c - 1j * eta, params) * inner
    return abs(lhs - rhs) / max(abs(lhs), 1.0)


IDENTITIES = ("inversion", "recursion_b", "recursion_binv", "ramanujan_full", "ram1", "ram2", "heine")


def check_identity(name, params=ModularParams(), samples=None, count=10, seed=0):
    """Largest residual of the named identity over its sample points.

    Residuals are |LHS - RHS| / max(|RHS|, 1) for the functional equations and
    |LHS - RHS| / max(|LHS|, 1) for the integral identities.
    """
    if name == "inversion":
        pts = samples if samples is not None else _strip_points(params, count, seed)
        return residual_inversion(params, pts)
    if name in ("recursion_b", "recursion_binv"):
        which = "b" if name == "recursion_b" else "binv"
        b = complex(params.b)
        s = abs(b if which == "b" else 1 / b)
        lim = max(0.05, params.eta.real - s / 2 - 0.35)
        rng = np.random.default_rng(seed)
        pts = samples if samples is not None else rng.uniform(-2, 2, count) + 1j * rng.uniform(-lim, lim, count)
        return residual_recursion(params, pts, which)
    fn = {
        "ramanujan_full": residual_ramanujan_full,
        "ram1": residual_ram1,
        "ram2": residual_ram2,
        "heine": residual_heine,
    }.get(name)
    if fn is None:
        raise ValueError(f"unknown identity {name!r}; choose from {', '.join(IDENTITIES)}")
    cases = samples if samples is not None else DEFAULT_SAMPLES[name]
    return max(fn(params, **case) for case in cases)


# ---------------------------------------------------------------------------
# integral kernels


@dataclass
class KernelValue:
    """Linear delta constraints (coefficient dicts equal to zero) and the remaining amplitude."""

    constraints: list
    amplitude: complex
    symbols: dict = field(default_factory=dict)


def _lij(ell, i, j):
    return ell[i - 1] - ell[j - 1]


def kernel_R_coord(x, xp, ell, xi=1.0, zeta=-1.0, params=ModularParams()):
    """<x|R|x'> with rho_x = 1/(2K); xi = 1, zeta = -1 is the basic kernel."""
    eta = params.eta
    l23, l13 = _lij(ell, 2, 3), _lij(ell, 1, 3)
    x1, x2, x3 = x
    y1, y2, y3 = xp
    rho = 1 / (2 * params.K)
    u = x1 - y1
    amp = rho * phi(u + 0.5 * (xi - zeta) * l23 + 1j * eta, params) * np.exp(
        1j * np.pi * (u + xi * l23) * (x2 - y2 + zeta * l13 - 2j * eta)
    )
    cons = [{"x2": 1, "x'1": -1, "x'3": -1}, {"x'2": 1, "x1": -1, "x3": -1}]
    return KernelValue(cons, amp)


def kernel_R_mom(p, pp, ell, xi=1.0, zeta=-1.0, params=ModularParams()):
    eta = params.eta
    l23, l13 = _lij(ell, 2, 3), _lij(ell, 1, 3)
    p1, p2, p3 = p
    r1, r2, r3 = pp
    rho_x = 1 / (2 * params.K)
    rho_p = 8 * rho_x * np.exp(1j * np.pi * xi * l23 * (zeta * l13 - 2j * eta))
    amp = rho_p * phi(p2 - r3 - 0.5 * (xi + zeta) * l23 + 1j * eta, params) * np.exp(
        1j * np.pi * (p2 - r3 - xi * l23) * (p3 - p1 + zeta * l13 - 2j * eta)
    )
    cons = [{"p1": 1, "p2": 1, "p'1": -1, "p'2": -1}, {"p2": 1, "p3": 1, "p'2": -1, "p'3": -1}]
    return KernelValue(cons, amp)


def kernel_K_coord(x, xp, params=ModularParams(), rho=1.0):
    """Amplitude with the undetermined overall constant carried as ``rho`` (default 1)."""
    eta, et = params.eta, params.eta_tilde
    dp = params.doubled()

    def tphi(z):
        return phi(np.asarray(z) / math.sqrt(2), dp)

    x1, x2, x3, x4 = x
    y1, y2, y3, y4 = xp
    alpha = (
        (x2 + x3 + x4) * y1 - x1 * y3 + 0.5 * (x4 * y4 - x2 * y2)
        + (x1 - y1) * (2 * y1 + y4 - 2j * eta)
        + 0.5 * (x2 - 2 * y1 - y4) * (x2 + 2 * x3 - 2 * y1 - y4)
    )
    amp = rho * np.exp(1j * np.pi * alpha) * phi(x1 - y1 + 1j * eta, params) * tphi(-2 * x1 + 2 * y1 - 1j * et) / (
        tphi(-2 * x1 + x2 - y4 - 1j * et) * tphi(x4 + 2 * y1 - y2 - 1j * et)
    )
    cons = [{"x1": 1, "x3": 1, "x'1": -1, "x'3": -1}, {"x2": 1, "x4": 1, "x'2": -1, "x'4": -1}]
    return KernelValue(cons, amp, {"rho_x'": rho})


def kernel_K_mom(p, pp, params=ModularParams(), rho=1.0):
    eta, et = params.eta, params.eta_tilde
    dp = params.doubled()

    def tphi(z):
        return phi(np.asarray(z) / math.sqrt(2), dp)

    p1, p2, p3, p4 = p
    r1, r2, r3, r4 = pp
    beta = (
        0.25 * (p2**2 + p4**2 - 5 * r2**2 - 5 * r4**2) - p1**2 + r1 * (3 * p1 - 2 * r1)
        + r2 * (3 * p1 - p4 - 4 * r1) + r3 * (p2 + p3 - r3)
        + r4 * (p1 + 3 * p2 + 3 * p3 - 4 * r3) + 2 * (p1 - r1 - r2 + r4) * 1j * eta
    )
    amp = rho * np.exp(1j * np.pi * beta) * phi(p2 + p3 - r3 - r4 + 1j * eta, params) * tphi(
        -p2 + p4 - r2 + r4 - 1j * et
    ) / (tphi(p4 - r2 - 1j * et) * tphi(r4 - p2 - 1j * et))
    cons = [
        {"p1": 1, "p2": 1, "p3": 1, "p'1": -1, "p'2": -1, "p'3": -1},
        {"p2": 1, "p3": 2, "p4": 1, "p'2": -1, "p'3": -2, "p'4": -1},
    ]
    return KernelValue(cons, amp, {"rho_p'": rho})


def fourier_check(params=ModularParams(), ell=(1.1, 0.2, -0.1), xi=1.0, zeta=-1 + 0.5j, s=0.3, k0=0.2, sigma=0.5):
    """Compare the coordinate and momentum kernels of R through a smeared Fourier transform.

    On the delta supports the coordinate amplitude depends on u = x1 - x1',
    v = x2 - x2' and the momentum amplitude on s = p3' - p1', k = p3' - p2.
    The transform reads amp_p(s, k) = 4 int du dv e^{i pi (u s + v k)} amp_x(u, v).
    Smearing in k with a Gaussian h turns the v-integral into an absolutely
    convergent one; both sides are then computed by quadrature. Returns the
    relative residual.
    """
    hu, hv = 0.01, 0.02
    # coordinate side: representative x1 = x3 = 0
    u = np.arange(-25, 35 + hu / 2, hu)
    v = np.arange(-8, 8 + hv / 2, hv)
    U, V = np.meshgrid(u, v, indexing="ij")
    zero = np.zeros_like(U)
    kx = kernel_R_coord((zero, V, zero), (-U, zero, V + U), ell, xi, zeta, params)
    hhat = sigma * math.sqrt(2 * math.pi) * np.exp(1j * np.pi * V * k0 - (np.pi * sigma * V) ** 2 / 2)
    rhs = 4 * np.sum(np.exp(1j * np.pi * U * s) * kx.amplitude * hhat) * hu * hv
    # momentum side: representative p1' = p2' = 0, p3' = s
    hk = 0.005
    k = np.arange(k0 - 10 * sigma, k0 + 10 * sigma + hk / 2, hk)
    kp = kernel_R_mom((k - s, s - k, k), (0 * k, 0 * k, s + 0 * k), ell, xi, zeta, params)
    lhs = np.sum(np.exp(-((k - k0) ** 2) / (2 * sigma**2)) * kp.amplitude) * hk
    return abs(lhs - rhs) / abs(lhs)
