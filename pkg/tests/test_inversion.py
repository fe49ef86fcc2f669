import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ellinv.errors import CenterSingular
from ellinv.geometry import Direction, Point, RigidMotion, distance
from ellinv.inversion import (INFINITY, Ellipse, circle_inversion, conjugated, directional_radius,
                              invert_point, invert_point_by_polar, invert_point_by_ray,
                              invert_point_by_squash, polar_line)

E = Ellipse(a=2.5, b=1.5)
P_WORKED = Point(3.72, 1.6)


def ray_root(a, b, dx, dy):
    """Positive root of (t dx / a)^2 + (t dy / b)^2 = 1, via numpy.roots."""
    roots = np.roots([(dx / a) ** 2 + (dy / b) ** 2, 0.0, -1.0])
    return max(r.real for r in roots)


def close(p, q, tol):
    return distance(p, q) <= tol * max(1.0, q.norm())


# -- directional radius -------------------------------------------------------

def test_directional_radius_axes():
    assert directional_radius(E, Direction(1, 0)).w == 2.5
    assert directional_radius(E, Direction(0, 1)).w == 1.5


def test_directional_radius_toward_figure_point():
    d = Direction(3.72, 1.6)
    w = directional_radius(E, d).w
    assert w == pytest.approx(ray_root(2.5, 1.5, d.dx, d.dy), rel=1e-14)
    assert w == pytest.approx(2.21184047124, abs=1e-10)


def test_directional_radius_boundary_point_on_ellipse():
    e = Ellipse(Point(1, -2), 3.0, 0.7, 0.4)
    for ang in np.linspace(0, 2 * math.pi, 17):
        dr = directional_radius(e, Direction(math.cos(ang), math.sin(ang)))
        assert abs(e.level(dr.boundary_point)) <= 1e-13
        assert distance(e.center, dr.boundary_point) == pytest.approx(dr.w, rel=1e-14)


def test_directional_radius_constant_on_circle():
    e = Ellipse(a=1.7, b=1.7)
    for ang in np.linspace(0, 2 * math.pi, 11):
        assert directional_radius(e, Direction(math.cos(ang), math.sin(ang))).w == pytest.approx(1.7, rel=1e-15)


# -- point map ----------------------------------------------------------------

def test_fixed_point_on_ellipse():
    assert invert_point(E, Point(2.5, 0)) == Point(2.5, 0)


def test_center_and_infinity_swap():
    assert invert_point(E, Point(0, 0)) is INFINITY
    assert invert_point(E, INFINITY) == E.center
    e = Ellipse(Point(1, 2), 2, 1)
    assert invert_point(e, Point(1, 2)) is INFINITY
    assert invert_point(e, INFINITY) == Point(1, 2)


def test_worked_example_point():
    p = invert_point(E, P_WORKED)
    # oracle: w^2 / |OP| along the ray
    d = Direction(3.72, 1.6)
    w = ray_root(2.5, 1.5, d.dx, d.dy)
    r = w * w / math.hypot(3.72, 1.6)
    assert p.x == pytest.approx(r * d.dx, rel=1e-13)
    assert p.y == pytest.approx(r * d.dy, rel=1e-13)
    assert p.x == pytest.approx(1.10981, abs=5e-6)
    assert p.y == pytest.approx(0.47734, abs=5e-6)
    assert distance(p, Point(1.11, 0.48)) <= 0.01


def test_ray_construction_examples():
    assert invert_point_by_ray(Ellipse(a=1, b=1), Point(2, 0)) == Point(0.5, 0)
    q = invert_point_by_ray(Ellipse(a=2, b=1), Point(2, 2))
    assert q.x == pytest.approx(0.4, rel=1e-14) and q.y == pytest.approx(0.4, rel=1e-14)
    assert close(invert_point_by_ray(E, P_WORKED), invert_point(E, P_WORKED), 1e-12)


def test_ray_construction_center_guard():
    with pytest.raises(CenterSingular):
        invert_point_by_ray(E, Point(1e-13, 0))
    with pytest.raises(CenterSingular):
        invert_point_by_squash(E, Point(0, 0))


def test_near_center_is_large_but_finite():
    p = invert_point(E, Point(1e-150, 1e-150))
    assert math.isfinite(p.x) and p.norm() > 1e140


# -- polar line ---------------------------------------------------------------

def test_polar_of_vertex_is_tangent():
    line = polar_line(E, Point(2.5, 0))
    assert line.to_text() == "1,0:2;0,0:-5"  # x = 5/2


def test_polar_line_coefficients_worked_example():
    line = polar_line(E, P_WORKED)
    m, n = (float(c) for c in line.linear_part)
    c = -float(line.constant)
    # proportional to 8.37 x + 10 y = 14.0625
    s = 14.0625 / c
    assert m * s == pytest.approx(8.37, rel=1e-15)
    assert n * s == pytest.approx(10.0, rel=1e-15)
    x = 14.0625 / (8.37 + 10 * 1.6 / 3.72)
    assert x == pytest.approx(1.10981, abs=5e-6)
    assert close(invert_point_by_polar(E, P_WORKED), invert_point(E, P_WORKED), 1e-12)


def test_polar_line_resolves_interior_and_exterior():
    # a = 2, b = 1, p = (2, 2): b^2 u = 2, a^2 v = 8, a^2 b^2 = 4  ->  2x + 8y = 4
    e = Ellipse(a=2, b=1)
    line = polar_line(e, Point(2, 2))
    assert line.to_text() == "1,0:1;0,1:4;0,0:-2"
    assert line(Fraction(2, 5), Fraction(2, 5)) == 0
    # the same form holds for interior points, checked against the ray construction
    for p in (Point(0.3, 0.2), Point(-0.5, 0.1), Point(5, -7), Point(0.01, -0.02)):
        q = invert_point_by_ray(e, p)
        ln = polar_line(e, p)
        assert abs(ln.evaluate_float(q.x, q.y)) <= 1e-12 * sum(abs(float(c)) for _, c in ln.terms) * max(1, q.norm())
        assert close(invert_point_by_polar(e, p), q, 1e-12)


# -- posed ellipses -----------------------------------------------------------

def test_conjugated_identity():
    m, local = conjugated(E)
    assert m.apply(Point(3, 4)) == Point(3, 4)
    assert local == E


def test_translated_fixed_point():
    e = Ellipse(Point(1, 2), 2.5, 1.5)
    p = Point(3.5, 2)
    assert close(invert_point(e, p), p, 1e-15)


def test_rotated_example():
    e = Ellipse(a=2, b=1, phi=math.pi / 2)
    q = invert_point(e, Point(0, 3))
    assert q.x == pytest.approx(0, abs=1e-15)
    assert q.y == pytest.approx(4 / 3, rel=1e-15)


def test_conjugation_formula():
    e = Ellipse(Point(-1.3, 0.4), 3.1, 0.9, 0.77)
    m, local = conjugated(e)
    back = m.inverse()
    rng = np.random.default_rng(3)
    for x, y in rng.uniform(-8, 8, (200, 2)):
        p = Point(float(x), float(y))
        lhs = invert_point(e, p)
        rhs = back.apply(invert_point(local, m.apply(p)))
        assert distance(lhs, rhs) <= 1e-12 * max(1.0, distance(lhs, e.center))


# -- properties (hypothesis) ----------------------------------------------------

axes = st.floats(0.5, 5.0)
coords = st.floats(-50, 50)


@given(axes, axes, st.floats(-3, 3), st.floats(-3, 3), st.floats(-math.pi, math.pi), coords, coords)
def test_involution_and_ray(a, b, cx, cy, phi, x, y):
    e = Ellipse(Point(cx, cy), a, b, phi)
    p = Point(x, y)
    d = p - e.center
    assume(d.norm() > 1e-3)
    q = invert_point(e, p)
    back = invert_point(e, q)
    assert distance(back, p) <= 1e-10 * d.norm()
    dq = q - e.center
    assert abs(d.x * dq.y - d.y * dq.x) <= 1e-11 * d.norm() * dq.norm()
    assert d.x * dq.x + d.y * dq.y > 0
    w = directional_radius(e, Direction(d.x, d.y)).w
    assert d.norm() * dq.norm() == pytest.approx(w * w, rel=1e-10)


@given(axes, axes, coords, coords)
def test_interior_exterior_exchange(a, b, x, y):
    e = Ellipse(a=a, b=b)
    p = Point(x, y)
    lv = e.level(p)
    assume(abs(lv) > 1e-6 and p.norm() > 1e-3)
    assert (lv > 0) != (e.level(invert_point(e, p)) > 0)


@given(axes, axes, st.floats(0, 2 * math.pi))
def test_boundary_points_fixed(a, b, t):
    e = Ellipse(a=a, b=b)
    q = e.point_at(t)
    assert distance(invert_point(e, q), q) <= 1e-11


@given(axes, axes, coords, coords)
def test_three_oracles_agree(a, b, x, y):
    e = Ellipse(a=a, b=b)
    p = Point(x, y)
    assume(p.norm() > 1e-3)
    ref = invert_point(e, p)
    for f in (invert_point_by_ray, invert_point_by_squash, invert_point_by_polar):
        assert distance(f(e, p), ref) <= 1e-10 * ref.norm()


@given(axes, coords, coords)
def test_circle_reduction(a, x, y):
    p = Point(x, y)
    assume(p.norm() > 1e-3)
    ref = circle_inversion(Point(0, 0), a, p)
    assert distance(invert_point(Ellipse(a=a, b=a), p), ref) <= 1e-12 * ref.norm()


@given(axes, axes, coords, coords)
def test_squash_conjugation(a, b, x, y):
    p = Point(x, y)
    assume(p.norm() > 1e-3)
    k = a / b
    lhs = invert_point(Ellipse(a=a, b=b), p)
    rhs = circle_inversion(Point(0, 0), a, Point(x, k * y))
    assert distance(Point(lhs.x, k * lhs.y), rhs) <= 1e-10 * rhs.norm()


def test_ellipse_rejects_bad_axes():
    with pytest.raises(ValueError):
        Ellipse(a=0, b=1)


def test_motion_of_conjugation_is_world_to_local():
    e = Ellipse(Point(2, 1), 2, 1, math.pi / 3)
    m, _ = conjugated(e)
    assert isinstance(m, RigidMotion)
    u, v = e.to_local(Point(4, 4))
    q = m.apply(Point(4, 4))
    assert q.x == pytest.approx(u, abs=1e-14) and q.y == pytest.approx(v, abs=1e-14)
