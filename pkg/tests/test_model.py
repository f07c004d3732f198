import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import gamma as sgamma
from scipy.special import hyp1f1, hyp2f1, sph_harm_y

from ringcoulomb.checks import radial_nodes, radial_residual
from ringcoulomb.exceptions import DomainError
from ringcoulomb.model import (
    QuantumState,
    angular_H,
    conjugation_pair,
    deformed_Ylm,
    density,
    density_spherical,
    derive_quasi,
    energy,
    mean_radius,
    radial_R,
    radial_u,
    standard_Ylm,
)

# frozen from independent closed-form / scipy evaluations (see helpers below)
H00_B10_AT_EQUATOR = 1.056913465186955
Y11_B05_EQUATOR = -0.35590919939878657
RHO_521_B05 = 1.3442954092046251e-06  # (x, y, z) = (10, 0, 5)


def closed_form_00(b, theta):
    sb = math.sqrt(b)
    return (1 / math.pi) * 2 ** (-1 + sb) * sgamma(0.5 + sb) * math.sqrt((1 + 2 * sb) / sgamma(1 + 2 * sb)) * math.sin(theta) ** sb


def scipy_density(n, l, m, b, Z, x, y, z):
    """|Psi|^2 straight from scipy's gamma/hypergeometric routines in spherical coordinates."""
    mp = math.sqrt(m * m + b)
    nt, nr = l - abs(m), n - l - 1
    lp = nt + mp
    npr = nr + lp + 1
    r = math.sqrt(x * x + y * y + z * z)
    c = z / r
    rho = 2 * Z * r / npr
    u = (
        1 / sgamma(2 * lp + 2)
        * math.sqrt(Z * sgamma(npr + lp + 1) / (math.factorial(nr) * npr**2))
        * rho ** (lp + 1)
        * math.exp(-rho / 2)
        * hyp1f1(-nr, 2 * lp + 2, rho)
    )
    P = (1 - c * c) ** (mp / 2) * sgamma(lp + mp + 1) / (2**mp * sgamma(mp + 1) * sgamma(nt + 1)) * hyp2f1(
        -nt, lp + mp + 1, mp + 1, (1 - c) / 2
    )
    N = math.sqrt((2 * lp + 1) * math.factorial(nt) / (2 * sgamma(lp + mp + 1)))
    return (u / r) ** 2 * (N * P) ** 2 / (2 * math.pi)


# --- QuantumState / derive_quasi ---------------------------------------------


@pytest.mark.parametrize(
    "args,msg",
    [
        ((2, 2, 0), "l ≤ n−1"),
        ((2, 1, 2), "|m| ≤ l"),
        ((0, 0, 0), "n >= 1"),
        ((2, 1, 1, -2.0), "b must exceed −m²"),
        ((2, 1, 1, -1.0), "b must exceed −m²"),
        ((2, 1, 0, -0.1), "b must exceed −m²"),
        ((2, 1, 0, 0.0, 0.0), "Z > 0"),
    ],
)
def test_state_invariants(args, msg):
    with pytest.raises(DomainError, match=msg):
        QuantumState(*args)


def test_derive_quasi_examples():
    q = derive_quasi(QuantumState(2, 1, 1, 0.0))
    assert (q.mprime, q.lprime, q.nr, q.nprime) == (1.0, 1.0, 0, 2.0)
    q = derive_quasi(QuantumState(5, 2, 1, 0.5))
    assert q.mprime == pytest.approx(1.224745, abs=1e-6)
    assert q.ntheta == 1 and q.nr == 2
    assert q.lprime == pytest.approx(2.224745, abs=1e-6)
    assert q.nprime == pytest.approx(5.224745, abs=1e-6)
    q = derive_quasi(QuantumState(4, 0, 0, 10.0))
    assert q.mprime == pytest.approx(3.162278, abs=1e-6)
    assert q.ntheta == 0 and q.nr == 3
    assert q.nprime == pytest.approx(7.162278, abs=1e-6)


@settings(max_examples=100, deadline=None)
@given(n=st.integers(1, 8), data=st.data(), b=st.floats(0.0, 50.0))
def test_quasi_invariants(n, data, b):
    l = data.draw(st.integers(0, n - 1))
    m = data.draw(st.integers(-l, l))
    q = derive_quasi(QuantumState(n, l, m, b))
    assert q.mprime == pytest.approx(math.sqrt(m * m + b), rel=1e-15)
    assert q.ntheta == l - abs(m)
    assert q.nr == n - l - 1
    assert q.lprime == q.ntheta + q.mprime
    assert q.nprime == q.nr + q.lprime + 1
    assert q.lam == q.lprime * (q.lprime + 1)
    if b == 0:
        assert (q.mprime, q.lprime, q.nprime) == (abs(m), l, n)


def test_ring_term_breaks_m_degeneracy():
    # only +m and -m share (l', m') once b != 0
    n, l, b = 5, 4, 0.5
    keys = {}
    for m in range(-l, l + 1):
        q = derive_quasi(QuantumState(n, l, m, b))
        keys.setdefault((q.lprime, q.mprime), set()).add(m)
    assert all(group == {m, -m} for group in keys.values() for m in group)


# --- angular part -----------------------------------------------------------


def test_angular_examples():
    assert angular_H(QuantumState(1, 0, 0).quasi, 0.3) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert angular_H(QuantumState(2, 1, 0).quasi, 1.0) == pytest.approx(math.sqrt(1.5), rel=1e-15)
    assert closed_form_00(10.0, math.pi / 2) * math.sqrt(2 * math.pi) == pytest.approx(H00_B10_AT_EQUATOR, rel=1e-14)
    assert angular_H(QuantumState(1, 0, 0, 10.0).quasi, 0.0) == pytest.approx(H00_B10_AT_EQUATOR, rel=1e-13)


@pytest.mark.parametrize("b", [0.0, 0.5, 3.0, 10.0])
@pytest.mark.parametrize("m", [0, 1, 2])
def test_angular_orthonormality(m, b):
    if m == 0 and b < 0:
        pytest.skip("invalid")
    qs = [QuantumState(m + nt + 1, m + nt, m, b).quasi for nt in range(5)]
    for i, qi in enumerate(qs):
        for j, qj in enumerate(qs[: i + 1]):
            val, _ = quad(lambda x: angular_H(qi, x) * angular_H(qj, x), -1, 1, epsabs=1e-13, limit=200)
            assert val == pytest.approx(float(i == j), abs=1e-8)


def test_deformed_ylm_reduces_to_standard():
    rng = np.random.default_rng(1)
    theta = np.arccos(rng.uniform(-1, 1, 100))
    phi = rng.uniform(0, 2 * np.pi, 100)
    for l in range(6):
        for m in range(-l, l + 1):
            got = deformed_Ylm(QuantumState(l + 1, l, m), theta, phi)
            ref = sph_harm_y(l, m, theta, phi)
            assert np.max(np.abs(got - ref)) <= 1e-12, (l, m)
            assert np.max(np.abs(standard_Ylm(l, m, theta, phi) - ref)) <= 1e-12


def test_deformed_ylm_closed_form_examples():
    assert abs(deformed_Ylm(QuantumState(1, 0, 0), 0.4, 1.1) - 1 / math.sqrt(4 * math.pi)) < 1e-15
    y = deformed_Ylm(QuantumState(2, 1, 1, 0.5), math.pi / 2, 0.0)
    assert y.real == pytest.approx(Y11_B05_EQUATOR, rel=1e-13)
    assert y.imag == 0.0


@pytest.mark.parametrize("l,m,b", [(1, 1, 0.5), (2, 0, 10.0), (3, 2, 3.0), (4, 1, 10.0), (3, -2, 3.0)])
def test_deformed_ylm_unit_norm(l, m, b):
    qs = QuantumState(l + 1, l, m, b)
    val, _ = quad(lambda t: abs(deformed_Ylm(qs, t, 0.3)) ** 2 * math.sin(t), 0, math.pi, epsabs=1e-13, limit=200)
    assert 2 * math.pi * val == pytest.approx(1.0, abs=1e-9)


def test_conjugation_examples():
    up, down = conjugation_pair(QuantumState(3, 2, 0, 2.0), 0.8, 0.3)
    assert up == down and up.imag == 0
    up, down = conjugation_pair(QuantumState(2, 1, 1), math.pi / 3, math.pi / 4)
    assert abs(down + np.conj(up)) < 1e-15
    up, down = conjugation_pair(QuantumState(3, 2, 2, 3.0), 1.0, 0.7)
    assert abs(down - np.conj(up)) < 1e-12


# --- radial part --------------------------------------------------------------


def test_radial_examples():
    s = QuantumState(1, 0, 0)
    assert radial_u(s, 0.0) == 0.0
    assert radial_u(s, 1.0) == pytest.approx(2 * math.exp(-1), rel=1e-15)
    assert radial_u(QuantumState(4, 0, 0, 10.0), 0.0) == 0.0
    with pytest.raises(DomainError):
        radial_u(s, -0.1)


def exact_radial_norm(qs):
    """int u^2 dr done term by term: u^2 is e^{-t} times a polynomial in t = 2Zr/n'."""
    q = qs.quasi
    coeffs = [1.0]
    for k in range(q.nr):
        coeffs.append(coeffs[-1] * (-q.nr + k) / ((2 * q.lprime + 2 + k) * (k + 1)))
    pref2 = qs.Z * sgamma(q.nprime + q.lprime + 1) / (math.factorial(q.nr) * q.nprime**2) / sgamma(2 * q.lprime + 2) ** 2
    total = 0.0
    for i, ci in enumerate(coeffs):
        for j, cj in enumerate(coeffs):
            total += ci * cj * sgamma(2 * q.lprime + 3 + i + j)
    return pref2 * total * q.nprime / (2 * qs.Z)


@pytest.mark.parametrize("state", [(4, 0, 0, 10.0), (5, 2, 1, 0.5), (6, 5, 1, 10.0), (3, 1, 0, 0.0), (5, 0, 0, 0.5)])
@pytest.mark.parametrize("Z", [1.0, 2.5])
def test_radial_normalization(state, Z):
    qs = QuantumState(*state, Z=Z)
    assert exact_radial_norm(qs) == pytest.approx(1.0, abs=1e-10)
    val, _ = quad(lambda r: radial_u(qs, r) ** 2, 0, np.inf, epsabs=1e-13, limit=400)
    assert val == pytest.approx(1.0, abs=1e-8)


def test_radial_R_limits():
    s = QuantumState(1, 0, 0, Z=2.0)
    # R_10(0) = 2 Z^{3/2}
    assert radial_R(s, 0.0) == pytest.approx(2 * 2.0**1.5, rel=1e-14)
    assert radial_R(QuantumState(2, 1, 1, 0.5), 0.0) == 0.0
    r = np.array([1e-3, 0.5, 3.0])
    np.testing.assert_allclose(radial_R(s, r) * r, radial_u(s, r), rtol=1e-14)


def test_energy_examples():
    assert energy(QuantumState(1, 0, 0)) == -0.5
    assert energy(QuantumState(2, 1, 1)) == -0.125
    s = QuantumState(2, 1, 1, 0.5)
    assert energy(s) == pytest.approx(-1 / (2 * (1 + math.sqrt(1.5)) ** 2), rel=1e-15)
    assert radial_residual(s) <= 1e-6
    # a wrong energy shows up in the residual
    assert energy(QuantumState(3, 1, 1, 0.5)) < energy(QuantumState(4, 1, 1, 0.5))


@pytest.mark.parametrize("n", range(1, 7))
def test_node_counts(n):
    for l in range(n):
        for m in range(l + 1):
            for b in (0.0, 0.5, 10.0):
                assert radial_nodes(QuantumState(n, l, m, b)) == n - l - 1


def test_mean_radius_closed_form():
    qs = QuantumState(5, 2, 1, 0.5)
    val, _ = quad(lambda r: r * radial_u(qs, r) ** 2, 0, np.inf, epsabs=1e-12, limit=400)
    assert val == pytest.approx(mean_radius(qs), rel=1e-9)


# --- density ------------------------------------------------------------------


def test_density_examples():
    s = QuantumState(1, 0, 0)
    assert density(s, 1.0, 0.0, 0.0) == pytest.approx(math.exp(-2) / math.pi, rel=1e-14)
    assert density(s, 0.0, 0.0, 0.0) == pytest.approx(1 / math.pi, rel=1e-14)
    assert scipy_density(5, 2, 1, 0.5, 1.0, 10.0, 0.0, 5.0) == pytest.approx(RHO_521_B05, rel=1e-12)
    assert density(QuantumState(5, 2, 1, 0.5), 10.0, 0.0, 5.0) == pytest.approx(RHO_521_B05, rel=1e-12)


def test_density_origin_is_finite():
    for st_ in [(1, 0, 0), (2, 1, 1, 0.5), (4, 0, 0, 10.0), (3, 2, 0)]:
        val = density(QuantumState(*st_), 0.0, 0.0, 0.0)
        assert np.isfinite(val) and val >= 0


@settings(max_examples=60, deadline=None)
@given(
    x=st.floats(-20, 20),
    y=st.floats(-20, 20),
    z=st.floats(-20, 20),
    ang=st.floats(0, 2 * math.pi),
)
def test_density_axisymmetric(x, y, z, ang):
    qs = QuantumState(5, 2, 1, 0.5)
    c, s = math.cos(ang), math.sin(ang)
    a = density(qs, x, y, z)
    b = density(qs, c * x - s * y, s * x + c * y, z)
    assert a >= 0
    assert b == pytest.approx(a, rel=1e-9, abs=1e-300)
    assert density(qs, -x, -y, z) == pytest.approx(a, rel=1e-12, abs=1e-300)


def test_density_b_continuity():
    rng = np.random.default_rng(7)
    pts = rng.uniform(-15, 15, (100, 3))
    # m' = sqrt(m^2 + b) has an infinite b-slope when m = 0, so that case gets a smaller b
    for n, l, m, db in [(3, 2, 1, 1e-8), (4, 0, 0, 1e-12), (5, 3, 2, 1e-8)]:
        a = density(QuantumState(n, l, m, 0.0), *pts.T)
        b = density(QuantumState(n, l, m, db), *pts.T)
        assert np.max(np.abs(b - a)) <= 1e-5 * a.max()


def test_full_normalization_factorizes():
    for st_ in [(3, 2, 1, 0.5), (4, 0, 0, 10.0)]:
        qs = QuantumState(*st_)
        ru, _ = quad(lambda r: radial_u(qs, r) ** 2, 0, np.inf, epsabs=1e-13, limit=400)
        ang, _ = quad(lambda x: angular_H(qs.quasi, x) ** 2, -1, 1, epsabs=1e-13, limit=200)
        assert ru * ang == pytest.approx(1.0, abs=1e-8)
        # and the spherical density integrates to the same product
        tot, _ = quad(
            lambda r: r * r * quad(lambda c: density_spherical(qs, r, c), -1, 1, epsabs=1e-12)[0] * 2 * math.pi,
            0,
            np.inf,
            epsabs=1e-10,
            limit=200,
        )
        assert tot == pytest.approx(1.0, abs=1e-7)


def _row33(b, theta, c):
    s = math.sqrt(9 + b)
    return -(1 / math.pi) * 2 ** (-1 + s) * sgamma(0.5 + s) * math.sqrt((c + 2 * s) / sgamma(1 + 2 * s)) * math.sin(theta) ** s


@pytest.mark.parametrize("b", [0.0, 0.5, 10.0])
def test_l3_m3_closed_form_with_unit_constant(b):
    # the sin^3 closed form needs 1 + 2 m' under the root; at b = 0 that is 7 = 1 + 2*3
    for t in (math.pi / 6, math.pi / 3, math.pi / 2):
        y = deformed_Ylm(QuantumState(4, 3, 3, b), t, 0.0)
        assert y.real == pytest.approx(_row33(b, t, 1.0), rel=1e-12)
    ref = -math.sqrt(35 / (64 * math.pi)) * math.sin(1.0) ** 3
    assert _row33(0.0, 1.0, 1.0) == pytest.approx(ref, rel=1e-14)
    assert _row33(0.0, 1.0, 11.0) != pytest.approx(ref, rel=1e-3)
