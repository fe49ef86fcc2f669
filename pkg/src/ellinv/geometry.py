"""Points, directions, rigid motions and the shared tolerance settings.

Everything here works in double precision; exact arithmetic lives in
:mod:`ellinv.curves`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OffLine


@dataclass(frozen=True, slots=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")

    def __add__(self, other: Point) -> Point:
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point) -> Point:
        return Point(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> Point:
        return Point(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __iter__(self):
        yield self.x
        yield self.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


ORIGIN = Point(0.0, 0.0)


@dataclass(frozen=True, slots=True)
class Direction:
    """Unit vector; normalized on construction."""

    dx: float
    dy: float

    def __post_init__(self):
        n = math.hypot(self.dx, self.dy)
        if n == 0.0 or not math.isfinite(n):
            raise ValueError("direction must be a finite nonzero vector")
        object.__setattr__(self, "dx", self.dx / n)
        object.__setattr__(self, "dy", self.dy / n)

    @classmethod
    def towards(cls, origin: Point, target: Point) -> Direction:
        return cls(target.x - origin.x, target.y - origin.y)


@dataclass(frozen=True, slots=True)
class RigidMotion:
    """Rotation by ``phi`` about the origin, then translation."""

    phi: float = 0.0
    translation: Point = ORIGIN

    def apply(self, p: Point) -> Point:
        c, s = math.cos(self.phi), math.sin(self.phi)
        return Point(c * p.x - s * p.y + self.translation.x,
                     s * p.x + c * p.y + self.translation.y)

    def inverse(self) -> RigidMotion:
        # x = R p + t  =>  p = R^-1 x - R^-1 t
        c, s = math.cos(-self.phi), math.sin(-self.phi)
        t = self.translation
        return RigidMotion(-self.phi, Point(-(c * t.x - s * t.y), -(s * t.x + c * t.y)))

    @property
    def is_identity(self) -> bool:
        return self.phi == 0.0 and self.translation == ORIGIN


@dataclass(frozen=True, slots=True)
class Tolerance:
    rel: float = 1e-10
    abs_floor: float = 1e-14
    center_guard: float = 1e-12

    def __post_init__(self):
        if not (self.rel > 0 and self.abs_floor > 0 and self.center_guard > 0):
            raise ValueError("tolerance fields must be strictly positive")


DEFAULT_TOL = Tolerance()


def distance(p: Point, q: Point) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def cross(u: Point, v: Point) -> float:
    return u.x * v.y - u.y * v.x


def are_collinear(a: Point, b: Point, c: Point, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Scale-invariant collinearity test on the cross product (b-a) x (c-a)."""
    scale = max(distance(a, b), distance(a, c), distance(b, c))
    if scale == 0.0:
        return True
    return abs(cross(b - a, c - a)) <= tol.rel * scale * scale


def apply_motion(m: RigidMotion, p: Point) -> Point:
    return m.apply(p)


def signed_distance_along(line_origin: Point, direction: Direction, p: Point,
                          tol: Tolerance = DEFAULT_TOL) -> float:
    """Return t with ``p = line_origin + t * direction``.

    Raises OffLine when p sits farther from the line than
    ``max(abs_floor, rel * |p - line_origin|)``.
    """
    d = p - line_origin
    t = d.x * direction.dx + d.y * direction.dy
    off = abs(d.x * direction.dy - d.y * direction.dx)
    if off > max(tol.abs_floor, tol.rel * d.norm()):
        raise OffLine(f"point {p} is {off:.3g} away from the line")
    return t
