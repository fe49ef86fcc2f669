"""Inversion in an ellipse.

A point P is sent to P' on the ray from the center O through P with
``|OP| * |OP'| = w**2``, where ``w`` is the distance from O to the ellipse
measured along that ray. The center and the single point at infinity are
swapped.

Besides the closed form there are three independent constructions used as
cross-checks: the ray construction (the definition), the polar line
(chord of contact) met with the line OP, and conjugation of circle
inversion by the squash ``(x, y) -> (x, (a/b) y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import CenterSingular
from .geometry import (DEFAULT_TOL, ORIGIN, Direction, Point, RigidMotion,
                       Tolerance)


class _Infinity:
    """The single point at infinity of the extended plane."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

ExtendedPoint = Union[Point, _Infinity]


@dataclass(frozen=True, slots=True)
class Ellipse:
    """Ellipse of inversion: center, semi-axis ``a`` along the local x axis,
    ``b`` along the local y axis, axes rotated by ``phi``."""

    center: Point = ORIGIN
    a: float = 1.0
    b: float = 1.0
    phi: float = 0.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"semi-axes must be positive, got a={self.a}, b={self.b}")

    @property
    def is_standard(self) -> bool:
        return self.phi == 0.0 and self.center == ORIGIN

    def to_local(self, p: Point) -> tuple[float, float]:
        dx, dy = p.x - self.center.x, p.y - self.center.y
        if self.phi == 0.0:
            return dx, dy
        c, s = math.cos(self.phi), math.sin(self.phi)
        return c * dx + s * dy, -s * dx + c * dy

    def to_world(self, u: float, v: float) -> Point:
        if self.phi == 0.0:
            return Point(u + self.center.x, v + self.center.y)
        c, s = math.cos(self.phi), math.sin(self.phi)
        return Point(c * u - s * v + self.center.x, s * u + c * v + self.center.y)

    def level(self, p: Point) -> float:
        """``(u/a)^2 + (v/b)^2 - 1`` in local coordinates: <0 inside, >0 outside."""
        u, v = self.to_local(p)
        return (u / self.a) ** 2 + (v / self.b) ** 2 - 1.0

    def point_at(self, theta: float) -> Point:
        return self.to_world(self.a * math.cos(theta), self.b * math.sin(theta))

    def guard_radius(self, tol: Tolerance = DEFAULT_TOL) -> float:
        return tol.center_guard * max(self.a, self.b)


@dataclass(frozen=True, slots=True)
class DirectionalRadius:
    dir: Direction
    w: float
    boundary_point: Point


def directional_radius(e: Ellipse, direction: Direction) -> DirectionalRadius:
    if e.phi == 0.0:
        du, dv = direction.dx, direction.dy
    else:
        c, s = math.cos(e.phi), math.sin(e.phi)
        du, dv = c * direction.dx + s * direction.dy, -s * direction.dx + c * direction.dy
    w = 1.0 / math.hypot(du / e.a, dv / e.b)
    q = Point(e.center.x + w * direction.dx, e.center.y + w * direction.dy)
    return DirectionalRadius(direction, w, q)


def invert_point(e: Ellipse, p: ExtendedPoint) -> ExtendedPoint:
    """Closed-form elliptic inversion on the extended plane."""
    if p is INFINITY:
        return e.center
    if p == e.center:
        return INFINITY
    u, v = e.to_local(p)
    # a^2 b^2 u / (b^2 u^2 + a^2 v^2) == u / s^2 with s = |(u/a, v/b)|;
    # dividing by s twice keeps tiny inputs from underflowing s^2.
    s = math.hypot(u / e.a, v / e.b)
    return e.to_world(u / s / s, v / s / s)


def _check_guard(e: Ellipse, p: Point, tol: Tolerance) -> float:
    r = math.hypot(p.x - e.center.x, p.y - e.center.y)
    if r < e.guard_radius(tol):
        raise CenterSingular(f"{p} lies within the center guard of {e}")
    return r


def invert_point_by_ray(e: Ellipse, p: Point, tol: Tolerance = DEFAULT_TOL) -> Point:
    """Construct P' from the definition: w along the ray, then |OP'| = w^2/|OP|."""
    r = _check_guard(e, p, tol)
    w = directional_radius(e, Direction.towards(e.center, p)).w
    k = (w / r) ** 2
    return Point(e.center.x + k * (p.x - e.center.x), e.center.y + k * (p.y - e.center.y))


def invert_point_by_squash(e: Ellipse, p: Point, tol: Tolerance = DEFAULT_TOL) -> Point:
    """Squash to a circle of radius a, invert there, unsquash."""
    _check_guard(e, p, tol)
    u, v = e.to_local(p)
    k = e.a / e.b
    qx, qy = u, k * v
    f = e.a * e.a / (qx * qx + qy * qy)
    return e.to_world(f * qx, f * qy / k)


def polar_coefficients(e: Ellipse, p: Point, tol: Tolerance = DEFAULT_TOL) -> tuple[float, float, float]:
    """(m, n, c) of the polar line ``m x + n y = c`` of p, local coordinates."""
    _check_guard(e, p, tol)
    u, v = e.to_local(p)
    a2, b2 = e.a * e.a, e.b * e.b
    return b2 * u, a2 * v, a2 * b2


def polar_line(e: Ellipse, p: Point, tol: Tolerance = DEFAULT_TOL):
    """Polar of p (local coordinates): ``b^2 u x + a^2 v y - a^2 b^2 = 0``.

    Coefficients are the exact rational values of the floats involved.
    For a point outside the ellipse this is the chord of contact of the
    two tangents from p; the same line serves for interior points.
    """
    from .curves import ImplicitCurve

    _check_guard(e, p, tol)
    u, v = (Fraction(t) for t in e.to_local(p))
    a2, b2 = Fraction(e.a) ** 2, Fraction(e.b) ** 2
    return ImplicitCurve({(1, 0): b2 * u, (0, 1): a2 * v, (0, 0): -a2 * b2})


def invert_point_by_polar(e: Ellipse, p: Point, tol: Tolerance = DEFAULT_TOL) -> Point:
    """Meet the polar line of p with the line through the center and p."""
    m, n, c = polar_coefficients(e, p, tol)
    u, v = e.to_local(p)
    # m x + n y = c  and  v x - u y = 0
    det = -m * u - n * v
    x = (-c * u) / det
    y = (-c * v) / det
    return e.to_world(x, y)


def conjugated(e: Ellipse) -> tuple[RigidMotion, Ellipse]:
    """Motion taking world coordinates to the ellipse's local frame, and the
    axis-aligned origin-centered copy of the ellipse."""
    to_world = RigidMotion(e.phi, e.center)
    return to_world.inverse(), Ellipse(ORIGIN, e.a, e.b, 0.0)


def circle_inversion(center: Point, radius: float, p: Point) -> Point:
    """Textbook inversion in a circle."""
    dx, dy = p.x - center.x, p.y - center.y
    k = radius * radius / (dx * dx + dy * dy)
    return Point(center.x + k * dx, center.y + k * dy)
