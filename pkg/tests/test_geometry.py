import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ramplab.errors import ArcLengthFidelity, DegenerateSegment, IndexOutOfRange, OriginHasNoAngle, TooFewPoints
from ramplab.geometry import (
    ArcCurve,
    Vec2,
    best_rotation,
    curvature_fd,
    fd_weights,
    from_polar,
    hausdorff,
    reparam_arclength,
    rotate90,
    rotation_matrix,
    sample_parametric,
    to_polar,
)

from conftest import circle_points

finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_rotate90_is_quarter_turn():
    assert rotate90((1.0, 0.0)) == Vec2(-0.0, 1.0)
    assert rotate90(rotate90((2.0, 3.0))) == Vec2(-2.0, -3.0)


@given(st.floats(-10, 10))
def test_rotation_matrix_orthonormal(theta):
    m = rotation_matrix(theta)
    assert np.allclose(m @ m.T, np.eye(2), atol=1e-14)
    assert math.isclose(np.linalg.det(m), 1.0, abs_tol=1e-14)


@given(finite, finite)
def test_polar_roundtrip(x, y):
    if x == 0 and y == 0:
        with pytest.raises(OriginHasNoAngle):
            to_polar((x, y))
        return
    r, th = to_polar((x, y))
    assert -math.pi < th <= math.pi
    px, py = from_polar(r, th)
    assert math.isclose(px, x, abs_tol=1e-12 * max(1, r))
    assert math.isclose(py, y, abs_tol=1e-12 * max(1, r))


def test_polar_branch_is_half_open():
    assert to_polar((-1.0, 0.0))[1] == math.pi
    assert to_polar((-1.0, -0.0))[1] == math.pi


@given(st.lists(st.floats(0.05, 1.0), min_size=4, max_size=6), st.integers(0, 2))
def test_fd_weights_exact_on_polynomials(gaps, m):
    x = np.cumsum(gaps)
    x0 = float(x[len(x) // 2])
    w = fd_weights(x, x0, m)
    deg = len(x) - 1
    for p in range(deg + 1):
        exact = math.perm(p, m) * x0 ** (p - m) if p >= m else 0.0
        assert math.isclose(w @ x**p, exact, rel_tol=1e-7, abs_tol=1e-6)


def test_circle_frame_and_curvature():
    for R in (0.5, 1.0, 5.0):
        c = reparam_arclength(circle_points(R, 3000), closed=True)
        assert np.allclose(c.curvature, 1 / R, rtol=1e-6)
        assert np.allclose(np.linalg.norm(c.tangent, axis=1), 1.0, atol=1e-12)
        assert np.allclose(np.einsum("ij,ij->i", c.tangent, c.normal), 0.0, atol=1e-12)
        assert math.isclose(c.length, 2 * math.pi * R, rel_tol=1e-6)


def test_clockwise_circle_has_negative_curvature():
    c = reparam_arclength(circle_points(2.0, 2000, ccw=False), closed=True)
    assert np.allclose(c.curvature, -0.5, rtol=1e-5)


def test_open_arc_endpoints_are_second_order():
    errs = []
    for n in (400, 800):
        th = np.linspace(0.0, 2.0, n)
        c = reparam_arclength(np.column_stack([np.cos(th), np.sin(th)]))
        errs.append(abs(c.curvature[[0, -1]] - 1.0).max())
        assert np.allclose(c.curvature, 1.0, atol=1e-4)
    assert errs[0] / errs[1] > 3.0


def test_curvature_fd_matches_frame():
    th = np.linspace(0.0, 3.0, 500)
    pts = np.column_stack([th, np.sin(th)])
    c = reparam_arclength(pts)
    for i in (0, 1, 250, 498, 499):
        assert math.isclose(curvature_fd(c, i), c.curvature[i], rel_tol=1e-12, abs_tol=1e-12)
    with pytest.raises(IndexOutOfRange):
        curvature_fd(c, 500)


def test_parabola_curvature_oracle():
    # kappa of y = x^2 at x is 2 / (1 + 4x^2)^(3/2)
    t, pts = sample_parametric(lambda x: np.column_stack([x, x * x]), -1.0, 1.0, 1e-3)
    c = reparam_arclength(pts)
    exact = 2 / (1 + 4 * t**2) ** 1.5
    assert np.abs(c.curvature - exact).max() < 1e-5


def test_sample_parametric_spacing_and_reversal():
    f = lambda t: np.column_stack([np.cos(t), 2 * np.sin(t)])
    t, pts = sample_parametric(f, 0.0, 2.0, 1e-3)
    ds = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    assert np.ptp(ds) < 1e-6
    tb, _ = sample_parametric(f, 2.0, 0.0, 1e-3)
    assert tb[0] == 2.0 and tb[-1] == 0.0


def test_input_validation():
    with pytest.raises(TooFewPoints):
        reparam_arclength([(0, 0), (1, 0), (2, 0)])
    with pytest.raises(DegenerateSegment):
        reparam_arclength([(0, 0), (1, 0), (1, 0), (2, 0)])
    pts = circle_points(1.0, 100)
    with pytest.raises(DegenerateSegment):
        reparam_arclength(np.vstack([pts, pts[:1]]), closed=True)


def test_fidelity_gate():
    c = reparam_arclength(circle_points(1.0, 100))
    stretched = dict(s=2 * c.s, pos=c.pos, tangent=c.tangent, normal=c.normal, curvature=c.curvature)
    with pytest.raises(ArcLengthFidelity):
        ArcCurve(**stretched)
    ArcCurve(**stretched, fidelity_tol=None)


def test_arrays_are_read_only():
    c = reparam_arclength(circle_points(1.0, 100), closed=True)
    with pytest.raises(ValueError):
        c.pos[0, 0] = 5.0


def test_reversed_flips_curvature_sign():
    c = reparam_arclength(circle_points(1.0, 500), closed=True)
    assert np.allclose(c.reversed().curvature, -c.curvature, rtol=1e-9)


@given(st.floats(-3, 3))
def test_best_rotation_recovers_angle(theta):
    th = np.linspace(0.2, 2.0, 50)
    src = np.column_stack([np.exp(th) * np.cos(th), np.exp(th) * np.sin(th)])
    tgt = src @ rotation_matrix(theta).T
    assert math.isclose(math.remainder(best_rotation(src, tgt) - theta, 2 * math.pi), 0.0, abs_tol=1e-12)


def test_hausdorff_of_offset_circles():
    a = circle_points(1.0, 4000)
    b = circle_points(1.1, 4000)
    assert math.isclose(hausdorff(a, b), 0.1, rel_tol=1e-5)
    assert hausdorff(a, a) == 0.0
