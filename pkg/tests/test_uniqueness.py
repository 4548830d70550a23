import math

import mpmath
import numpy as np
import pytest

from spheroconic.errors import DomainError
from spheroconic.geometry import Conic
from spheroconic.uniqueness import J_of_v, Verdict, certify, find_v0, radius_R


def j_reference(v):
    """J from its defining integrals (variable ``u`` with ``t = sin u``) in mpmath."""
    v = mpmath.mpf(v)
    u0 = mpmath.asin(mpmath.sqrt((1 + v) / 3))
    sv = mpmath.sqrt(1 + v)
    first = mpmath.quad(lambda u: 1 + v - 3 * mpmath.sin(u) ** 2, [0, u0])
    near = [mpmath.pi / 2 - k * mpmath.sqrt(v) for k in (10, 3, 1, mpmath.mpf(1) / 3)]
    pts = [u0] + [p for p in near if p > u0] + [mpmath.pi / 2]
    second = mpmath.quad(lambda u: (1 + v - 3 * mpmath.sin(u) ** 2) * sv
                         / mpmath.sqrt(1 + v - mpmath.sin(u) ** 2), pts)
    return float(first + second)


@pytest.mark.parametrize("v", [0.01, 0.3, 1.0, 1.5])
def test_j_matches_reference(v):
    assert J_of_v(v) == pytest.approx(j_reference(v), abs=1e-11)


def test_j_near_zero():
    assert J_of_v(1e-6) == pytest.approx(j_reference(1e-6), rel=1e-9)
    assert J_of_v(1e-6) < J_of_v(1e-3) < 0


def test_j_endpoints():
    assert J_of_v(2.0) == pytest.approx(3 * math.pi / 4, abs=1e-14)
    assert J_of_v(0.0) == -math.inf
    with pytest.raises(DomainError):
        J_of_v(2.5)


def test_j_increasing_with_single_sign_change():
    vals = [J_of_v(v) for v in np.linspace(0.01, 2.0, 60)]
    assert np.all(np.diff(vals) > 0)
    assert J_of_v(find_v0()) == pytest.approx(0.0, abs=1e-9)
    assert abs(J_of_v(0.685935)) < 2e-6


def test_v0():
    assert find_v0(1e-6) == pytest.approx(0.685935, abs=1e-5)
    a = find_v0(1e-10, 1e-10)
    b = find_v0(1e-10, 1e-12)
    assert a == pytest.approx(b, abs=1e-10)


def test_radius():
    assert radius_R() == pytest.approx(math.atan(1 / math.sqrt(0.685935)), abs=1e-5)
    assert radius_R() == pytest.approx(0.8791, abs=1e-4)


def test_small_circle_certified():
    cert = certify(Conic.circle(0.1), 0.1)
    assert cert.verdict is Verdict.UNIQUE
    assert cert.condition1_met and cert.condition2_met and cert.major_axis_ok


def test_example_conic_inconclusive():
    for rho in (0.05, 0.5, 1.2):
        cert = certify(Conic(1 / 16, 1 / 36), rho)
        assert cert.verdict is Verdict.INCONCLUSIVE
        assert not cert.major_axis_ok


def test_certificate_fields():
    cert = certify(Conic.circle(0.2), 0.1, rho_source="test")
    d = cert.as_dict()
    assert d["verdict"] == "Unique"
    assert d["rho_source"] == "test"
    assert cert.area_bound > cert.candidate_area
    assert not certify(Conic.circle(0.2), 0.3).condition1_met
    assert "rho exceeds R" in certify(Conic.circle(1.0), 0.95).notes
    with pytest.raises(DomainError):
        certify(Conic.circle(0.2), 0.0)
