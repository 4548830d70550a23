import math

import numpy as np
import pytest

from spheroconic.area import area_from_axes
from spheroconic.errors import DomainError, PreconditionViolated
from spheroconic.geometry import Conic, axis_angle_quaternion
from spheroconic.inbetween import (
    blend, blend_matrix, common_interior_point, example1_fixture, example1_grid,
    example1_rotations, sweep,
)

M0, M1 = (m.array for m in example1_fixture())


def test_fixture_matrices():
    np.testing.assert_array_equal(M0, np.diag([1 / 16, 1 / 36, -1]))
    r1, r2, r3 = example1_rotations()
    r = r1 @ r2 @ r3
    np.testing.assert_allclose(M1, r @ M0 @ r.T, atol=1e-15)
    c = math.cos(math.pi / 6)
    assert r3[0, 0] == pytest.approx(c)
    assert r2[0, 2] == pytest.approx(-math.sin(math.pi / 36))


def test_blend_endpoints_and_idempotence():
    c = blend(M0, M1, 0.0)
    assert (c.nu1, c.nu2) == pytest.approx((1 / 16, 1 / 36), abs=1e-15)
    d = blend(M0, M0, 0.5)
    np.testing.assert_allclose(d.matrix, M0, atol=1e-14)
    with pytest.raises(DomainError):
        blend_matrix(M0, M1, 1.5)


def test_blend_contains_common_interior():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(20000, 3))
    x /= np.linalg.norm(x, axis=1)[:, None]
    q0 = np.einsum("ni,ij,nj->n", x, M0, x)
    q1 = np.einsum("ni,ij,nj->n", x, M1, x)
    common = x[(q0 < 0) & (q1 < 0)][:1000]
    assert len(common) == 1000
    mid = blend(M0, M1, 0.5).matrix
    assert np.all(np.einsum("ni,ij,nj->n", common, mid, common) < 0)


def test_example_sweep_above_endpoints():
    grid = np.round(np.arange(1, 20) * 0.05, 10)
    sw = sweep(M0, M1, grid)
    assert sw.all_above_endpoints
    assert not sw.all_below_endpoints
    assert sw.area0 == pytest.approx(sw.area1, abs=1e-10)
    assert sw.area0 == pytest.approx(area_from_axes(6, 4).area, abs=1e-12)
    assert len(list(sw.rows())) == 19


def test_coaxial_sweep_below_endpoints():
    sw = sweep(np.diag([2.0, 1.0, -1.0]), np.diag([1.0, 2.0, -1.0]), example1_grid(9))
    assert sw.all_below_endpoints
    assert np.all(sw.areas < sw.area0)


def test_constant_sweep():
    sw = sweep(M0, M0, example1_grid(5))
    np.testing.assert_allclose(sw.areas, sw.area0, atol=1e-13)


def test_sweep_endpoint_limit():
    sw = sweep(M0, M1, [1e-2, 1e-4, 1e-6])
    gaps = np.abs(sw.areas - sw.area0)
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-6


def test_disjoint_conics_refused():
    far = Conic.circle(0.1, center=(1, 0, 0)).matrix
    near = Conic.circle(0.1).matrix
    assert common_interior_point(near, far) is None
    with pytest.raises(PreconditionViolated):
        blend(near, far, 0.5)
    with pytest.raises(PreconditionViolated):
        sweep(near, far, [0.5])


def test_common_point_off_centers():
    a = Conic(100.0, 1.0).matrix
    b = Conic(100.0, 1.0, axis_angle_quaternion((0, 0, 1), math.pi / 2)).matrix
    p = common_interior_point(a, b)
    assert p is not None
    assert p @ a @ p < 0 and p @ b @ p < 0


def test_grid():
    np.testing.assert_allclose(example1_grid(19), np.arange(1, 20) / 20)
    with pytest.raises(DomainError):
        example1_grid(0)
