"""Distances between inverse points, cross ratios and harmonic conjugates."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CenterSingular, DegenerateQuad, MidpointSingular, OffLine, PreconditionError
from .geometry import (DEFAULT_TOL, Direction, Point, Tolerance, are_collinear,
                       distance, signed_distance_along)
from .inversion import Ellipse, directional_radius


def inverse_distance_general(w: float, u: float, op: float, ot: float, pt: float) -> float:
    """Law-of-cosines form, valid for any P, T (w, u: radii toward P, T)."""
    w2, u2 = w * w, u * u
    rad = (w2 - u2) * (w2 * ot * ot - u2 * op * op) + w2 * u2 * pt * pt
    return math.sqrt(max(rad, 0.0)) / (op * ot)


def inverse_distance_collinear(w: float, op: float, ot: float, pt: float) -> float:
    return w * w * pt / (op * ot)


def inverse_distance(e: Ellipse, p: Point, t: Point, tol: Tolerance = DEFAULT_TOL) -> float:
    """|P'T'| from |OP|, |OT|, |PT| and the radii of inversion toward P and T,
    without computing the images."""
    guard = e.guard_radius(tol)
    op, ot = distance(e.center, p), distance(e.center, t)
    if op < guard or ot < guard:
        raise CenterSingular("point within the center guard")
    pt = distance(p, t)
    w = directional_radius(e, Direction.towards(e.center, p)).w
    if are_collinear(e.center, p, t, tol):
        # opposite rays see the same radius: the ellipse is centrally symmetric
        return inverse_distance_collinear(w, op, ot, pt)
    u = directional_radius(e, Direction.towards(e.center, t)).w
    return inverse_distance_general(w, u, op, ot, pt)


@dataclass(frozen=True)
class CollinearQuad:
    a: Point
    b: Point
    c: Point
    d: Point
    origin: Point
    direction: Direction

    @classmethod
    def from_points(cls, a: Point, b: Point, c: Point, d: Point,
                    tol: Tolerance = DEFAULT_TOL) -> CollinearQuad:
        pts = (a, b, c, d)
        for i in range(4):
            for j in range(i + 1, 4):
                if distance(pts[i], pts[j]) <= tol.abs_floor:
                    raise DegenerateQuad("points must be pairwise distinct")
        far = max(pts[1:], key=lambda q: distance(a, q))
        direction = Direction.towards(a, far)
        for q in pts[1:]:
            if not are_collinear(a, far, q, tol):
                raise OffLine(f"{q} is not on the line through {a} and {far}")
        return cls(a, b, c, d, a, direction)

    def coordinates(self) -> tuple[float, float, float, float]:
        # collinearity was checked (scale-relative) on construction
        loose = Tolerance(rel=1.0)
        return tuple(signed_distance_along(self.origin, self.direction, q, loose)
                     for q in (self.a, self.b, self.c, self.d))


def cross_ratio(q: CollinearQuad, tol: Tolerance = DEFAULT_TOL) -> float:
    """``{AB, CD} = (AC * BD) / (AD * BC)`` with signed distances."""
    ta, tb, tc, td = q.coordinates()
    ad, bc = td - ta, tc - tb
    if abs(ad) < tol.abs_floor or abs(bc) < tol.abs_floor:
        raise DegenerateQuad("vanishing denominator in the cross ratio")
    return (tc - ta) * (td - tb) / (ad * bc)


def distance_cross_ratio(a: Point, b: Point, c: Point, d: Point) -> float:
    """``(|AC| |BD|) / (|AD| |BC|)`` for any four points, collinear or not."""
    den = distance(a, d) * distance(b, c)
    if den == 0.0:
        raise DegenerateQuad("vanishing denominator in the cross ratio")
    return distance(a, c) * distance(b, d) / den


def _diameter_coords(q1: Point, q2: Point, pts, tol: Tolerance):
    mid = Point((q1.x + q2.x) / 2, (q1.y + q2.y) / 2)
    if distance(q1, q2) <= tol.abs_floor:
        raise DegenerateQuad("q1 and q2 coincide")
    direction = Direction.towards(mid, q1)
    for p in pts:
        if not are_collinear(q1, q2, p, tol):
            raise OffLine(f"{p} is not on the line q1 q2")
    loose = Tolerance(rel=1.0)
    return mid, direction, [signed_distance_along(mid, direction, p, loose) for p in pts]


def is_harmonic(q1: Point, q2: Point, p: Point, p_prime: Point, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether P (inside segment Q1Q2) and P' (outside, same side of the
    midpoint) divide Q1Q2 harmonically, using unsigned lengths."""
    _, _, (tp, tpp) = _diameter_coords(q1, q2, (p, p_prime), tol)
    half = distance(q1, q2) / 2
    if not abs(tp) < half or not abs(tpp) > half or tp * tpp <= 0:
        raise PreconditionError("p must lie inside the segment and p' outside it, on the same side")
    num = distance(q1, p) * distance(q2, p_prime)
    den = distance(q1, p_prime) * distance(q2, p)
    if den < tol.abs_floor:
        raise DegenerateQuad("vanishing denominator in the harmonic ratio")
    return abs(num / den - 1.0) <= tol.rel


def harmonic_conjugate(q1: Point, q2: Point, p: Point, tol: Tolerance = DEFAULT_TOL) -> Point:
    mid, _, (tp,) = _diameter_coords(q1, q2, (p,), tol)
    half = distance(q1, q2) / 2
    if abs(tp) < tol.abs_floor:
        raise MidpointSingular("the conjugate of the midpoint is at infinity")
    if not abs(tp) < half:
        raise PreconditionError("p must lie strictly inside the segment q1 q2")
    k = (half / distance(mid, p)) ** 2
    return Point(mid.x + k * (p.x - mid.x), mid.y + k * (p.y - mid.y))
