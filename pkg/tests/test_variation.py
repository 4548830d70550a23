import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from spheroconic.area import area_from_eigenvalues
from spheroconic.errors import DegenerateSpectrum, DomainError, PreconditionViolated
from spheroconic.geometry import Conic, half_turn, normalize_conic, quaternion_rotation, rotation_z
from spheroconic.inbetween import example1_fixture
from spheroconic.variation import (
    abc_coefficients, bernstein_coefficients, bernstein_poly, cleared_difference,
    decompose_halfturn, eigenvalue_rates, halfturn_axis, halfturn_target, rate_chain,
    rate_coaxial, rate_elliptic, rate_halfturn, rate_integral, variation_report,
)

M0, M1 = (m.array for m in example1_fixture())
pairs = st.tuples(st.floats(0.05, 40), st.floats(0.05, 40)).filter(
    lambda p: abs(p[0] - p[1]) > 1e-3 * max(p)).map(lambda p: (max(p), min(p)))


def blend_area(a0, a1, lam):
    nu = np.sort(np.linalg.eigvalsh((1 - lam) * a0 + lam * a1))[::-1]
    return area_from_eigenvalues(*nu, tol=1e-14).area


def fd_rate(a0, a1, h=1e-5):
    return (blend_area(a0, a1, h) - blend_area(a0, a1, -h)) / (2 * h)


def test_rates_vanish_for_identical_conics():
    assert eigenvalue_rates(M0, M0) == (0.0, 0.0, 0.0)
    assert rate_integral(Conic(1 / 16, 1 / 36), M0) == pytest.approx(0.0, abs=1e-15)


def test_diagonal_eigenvalue_rates():
    rates = eigenvalue_rates(np.diag([2.0, 1.0, -1.0]), np.diag([3.0, 2.0, -1.0]))
    np.testing.assert_allclose(rates, (1.0, 1.0, 0.0), atol=1e-14)


def test_eigenvalue_rates_by_differences():
    h = 1e-6
    up = np.sort(np.linalg.eigvalsh((1 - h) * M0 + h * M1))[::-1]
    dn = np.sort(np.linalg.eigvalsh((1 + h) * M0 - h * M1))[::-1]
    np.testing.assert_allclose(eigenvalue_rates(M0, M1), (up - dn) / (2 * h), rtol=1e-6, atol=1e-12)


def test_degenerate_spectrum_refused():
    with pytest.raises(DegenerateSpectrum):
        eigenvalue_rates(np.diag([1.0, 1.0, -1.0]), M1)
    with pytest.raises(DegenerateSpectrum):
        rate_integral(Conic(1.0, 1.0 - 1e-10), M1)
    with pytest.raises(DegenerateSpectrum):
        abc_coefficients(2.0, 2.0 - 1e-9)


def test_example_rate_matches_sweep_slope():
    c0 = Conic(1 / 16, 1 / 36)
    slope = fd_rate(M0, M1)
    assert rate_integral(c0, M1) == pytest.approx(slope, rel=1e-6)
    assert rate_elliptic(c0, M1) == pytest.approx(slope, rel=1e-6)
    assert rate_chain(M0, M1) == pytest.approx(slope, rel=1e-6)


def _random_pair(rng):
    n = np.sort(np.exp(rng.uniform(-3, 3, size=2)))[::-1]
    q0 = rng.normal(size=4)
    c0 = Conic(n[0] * 1.01, n[1], tuple(q0 / np.linalg.norm(q0)))
    n1 = np.sort(np.exp(rng.uniform(-3, 3, size=2)))[::-1]
    q = rng.normal(size=4)
    q = q / np.linalg.norm(q)
    # tilt the second conic so the pair shares an interior point
    r = quaternion_rotation(q)
    tilt = 0.2 * r[:, 2]
    axis = np.cross([0, 0, 1], tilt)
    ang = math.asin(min(1.0, np.linalg.norm(axis)))
    if ang > 0:
        k = axis / np.linalg.norm(axis)
        rot = (np.eye(3) * math.cos(ang) + math.sin(ang) * np.array(
            [[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]]) + (1 - math.cos(ang)) * np.outer(k, k))
    else:
        rot = np.eye(3)
    c1 = c0.rotation @ rot @ np.diag([n1[0], n1[1], -1]) @ rot.T @ c0.rotation.T
    return c0, normalize_conic(c1).matrix


def test_three_routes_agree_on_random_pairs():
    rng = np.random.default_rng(11)
    for _ in range(25):
        c0, m1 = _random_pair(rng)
        d_int = rate_integral(c0, m1)
        assert rate_elliptic(c0, m1) == pytest.approx(d_int, rel=1e-8, abs=1e-12)
        assert rate_chain(c0.matrix, m1) == pytest.approx(d_int, rel=1e-8, abs=1e-12)
        assert fd_rate(c0.matrix, m1) == pytest.approx(d_int, rel=1e-5, abs=1e-9)


def test_abc_signs_and_closed_forms():
    abc = abc_coefficients(1 / 16, 1 / 36)
    f = math.sqrt((1 / 16 - 1 / 36) / ((1 / 16) * (1 + 1 / 36)))
    e = float(mpmath.ellipe(f * f))
    assert abc.B == pytest.approx(-2 * (1 / 16) * (1 / 16 - 1 / 36) * e, rel=1e-13)
    n01, n02 = 1 / 16, 1 / 36
    s = math.sqrt(n01 * (1 + n02))
    integral = quad(lambda t: (n01 - n02) * math.sqrt(1 - t * t) * s
                    / math.sqrt(t * t * (n02 - n01) + n01 * (1 + n02)), 0, 1, epsabs=1e-15)[0]
    assert abc.C == pytest.approx(-2 * integral, abs=1e-10)
    assert abc.A < 0 and abc.C < 0


@given(pairs)
@settings(max_examples=60)
def test_abc_signs_random(nu):
    abc = abc_coefficients(*nu)
    assert abc.A < 0
    assert abc.C < 0
    assert abc.A < abc.C


def _world_coaxial(nu1, zeta):
    r = rotation_z(zeta)
    return r @ np.diag([nu1[0], nu1[1], -1.0]) @ r.T


@given(pairs, pairs, st.floats(0, math.pi))
@settings(max_examples=40)
def test_coaxial_rate_matches_quadrature(nu0, nu1, zeta):
    c0 = Conic(*nu0)
    expect = rate_integral(c0, _world_coaxial(nu1, zeta))
    assert rate_coaxial(nu0, nu1, zeta) == pytest.approx(expect, rel=1e-8, abs=1e-12)


def test_coaxial_rate_special_cases():
    nu0 = (3.0, 1.0)
    assert rate_coaxial(nu0, nu0, 0.0) == pytest.approx(0.0, abs=1e-14)
    vals = [rate_coaxial(nu0, (2.0, 2.0), z) for z in np.linspace(0, math.pi, 7)]
    np.testing.assert_allclose(vals, vals[0], rtol=1e-13)
    slope = fd_rate(np.diag([3.0, 1.0, -1.0]), _world_coaxial((2.0, 1.5), 0.4))
    assert rate_coaxial(nu0, (2.0, 1.5), 0.4) == pytest.approx(slope, rel=1e-6)


def test_halfturn_about_center_is_coaxial():
    nu0, nu1 = (5.0, 2.0), (4.0, 3.0)
    for z in (0.0, 0.3, 1.2):
        assert rate_halfturn(nu0, nu1, z, (0, 0, 1)) == pytest.approx(rate_coaxial(nu0, nu1, z),
                                                                       rel=1e-14)


def test_halfturn_rate_matches_quadrature():
    rng = np.random.default_rng(5)
    for _ in range(30):
        nu0 = tuple(np.sort(rng.uniform(0.5, 20, 2))[::-1])
        nu1 = tuple(np.sort(rng.uniform(0.5, 20, 2))[::-1])
        r = rng.normal(size=3)
        r /= np.linalg.norm(r)
        if r[2] ** 2 < r[0] ** 2:
            r = r[[2, 1, 0]]
        zeta = rng.uniform(0, math.pi)
        m1 = halfturn_target(nu1, zeta, r)
        expect = rate_integral(Conic(*nu0), m1)
        assert rate_halfturn(nu0, nu1, zeta, r) == pytest.approx(expect, rel=1e-8, abs=1e-12)


def test_halfturn_axis_condition_enforced():
    with pytest.raises(PreconditionViolated):
        rate_halfturn((5.0, 2.0), (4.0, 3.0), 0.0, (1, 0, 0))
    with pytest.raises(DomainError):
        rate_halfturn((5.0, 2.0), (4.0, 3.0), 0.0, (1, 1, 1))


def test_halfturn_axis_is_midpoint():
    c = np.array([0.3, -0.2, 0.9])
    c /= np.linalg.norm(c)
    r = halfturn_axis(c)
    np.testing.assert_allclose(half_turn(r) @ [0, 0, 1], c, atol=1e-15)
    assert r[0] ** 2 + r[1] ** 2 <= r[2] ** 2


def test_p0_vanishes_on_central_axis():
    p = bernstein_coefficients((5.0, 2.0), (4.0, 3.0), (0, 0, 1))
    assert p[0] == 0.0
    assert all(abs(x) < 1e-12 for x in p)


def test_p0_nonzero_off_center():
    r = np.array([0.1, 0.05, 1.0])
    p = bernstein_coefficients((5.0, 2.0), (4.0, 3.0), r / np.linalg.norm(r))
    assert p[0] < 0


def test_reconstruction_matches_cleared_difference():
    rng = np.random.default_rng(2)
    for _ in range(50):
        nu0 = tuple(np.sort(rng.uniform(0.7, 30, 2))[::-1])
        lo, hi = nu0[1], nu0[0]
        nu1 = tuple(np.sort(rng.uniform(lo, hi, 2))[::-1])
        r = rng.normal(size=3)
        r[2] = abs(r[2]) + math.hypot(r[0], r[1])
        r /= np.linalg.norm(r)
        p = bernstein_coefficients(nu0, nu1, r)
        for t in np.linspace(0.05, 0.95, 7):
            got = float(bernstein_poly(p, t))
            ref = cleared_difference(nu0, nu1, r, t)
            assert got == pytest.approx(ref, abs=1e-9 * (1 + max(abs(x) for x in p)))


def test_variation_report_is_consistent():
    rng = np.random.default_rng(9)
    for _ in range(10):
        c0, m1 = _random_pair(rng)
        rep = variation_report(c0.matrix, m1)
        assert rep.d_elliptic == pytest.approx(rep.d_integral, rel=1e-8, abs=1e-12)
        assert rep.d_chain == pytest.approx(rep.d_integral, rel=1e-8, abs=1e-12)
        assert rep.d_halfturn == pytest.approx(rep.d_integral, rel=1e-8, abs=1e-12)


def test_decomposition_reproduces_target():
    c0 = Conic(6.0, 2.0)
    m1 = halfturn_target((4.0, 3.0), 0.7, np.array([0.1, 0.2, 1.0]) / math.sqrt(1.05))
    nu1, zeta, r = decompose_halfturn(c0, m1)
    back = halfturn_target(nu1, zeta, r)
    np.testing.assert_allclose(back, normalize_conic(m1).matrix, atol=1e-12)
