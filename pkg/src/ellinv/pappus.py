"""Pappus chain of homothetic ellipses in an elliptic arbelos.

Layout: A = (0, 0), C = (r*ab, 0), B = (ab, 0). The outer semiellipse E
spans AB, E' spans AC and E0 spans CB, all above AB and all with vertical
semi-axis k times the horizontal one. E1, E2, ... are tangent to E and E',
each tangent to its predecessor, starting from E0.

Squashing by (x, y) -> (x, y/k) turns every ellipse in the figure into a
circle and the elliptic inversions into circle inversions, so the chain is
built as a classical Pappus chain and then stretched back.
"""

from __future__ import annotations

import csv
import io
import math
import numbers
from dataclasses import dataclass, field
from fractions import Fraction

from .curves import ImplicitCurve, InversionEllipseExact
from .errors import IndexOutOfRange, InvalidSpec
from .geometry import Point
from .inversion import Ellipse


@dataclass(frozen=True)
class ChainSpec:
    ab: float = 1.0
    r: float = 2 / 3
    k: float = 1.0
    count: int = 5

    def __post_init__(self):
        if not isinstance(self.count, numbers.Integral) or isinstance(self.count, bool):
            raise InvalidSpec(f"count must be an integer, got {self.count!r}")
        if self.count < 1:
            raise InvalidSpec(f"count must be >= 1, got {self.count}")
        if not (self.ab > 0 and math.isfinite(self.ab)):
            raise InvalidSpec(f"ab must be positive, got {self.ab}")
        if not 0 < self.r < 1:
            raise InvalidSpec(f"r must lie in (0, 1), got {self.r}")
        if not (self.k > 0 and math.isfinite(self.k)):
            raise InvalidSpec(f"k must be positive, got {self.k}")

    @property
    def a_point(self) -> Point:
        return Point(0.0, 0.0)

    @property
    def b_point(self) -> Point:
        return Point(self.ab, 0.0)

    @property
    def c_point(self) -> Point:
        return Point(self.r * self.ab, 0.0)


@dataclass(frozen=True)
class ChainElement:
    index: int
    center: Point
    rx: float
    ry: float
    h: float

    def as_ellipse(self) -> Ellipse:
        return Ellipse(self.center, self.rx, self.ry)

    def implicit(self, k: Fraction, precision: int = 10**12) -> ImplicitCurve:
        """Rationalized ``(x-cx)^2 + ((y-cy)/k)^2 = rx^2``."""
        cx = Fraction(self.center.x).limit_denominator(precision)
        cy = Fraction(self.center.y).limit_denominator(precision)
        rx = Fraction(self.rx).limit_denominator(precision)
        ik2 = 1 / (k * k)
        return ImplicitCurve.conic(1, 0, ik2, -2 * cx, -2 * cy * ik2, cx * cx + cy * cy * ik2 - rx * rx)


@dataclass(frozen=True)
class BaseCurve:
    """One of the three semiellipses on AB."""

    name: str
    center: Point
    rx: float
    ry: float

    def as_ellipse(self) -> Ellipse:
        return Ellipse(self.center, self.rx, self.ry)


def base_curves(spec: ChainSpec) -> tuple[BaseCurve, BaseCurve, BaseCurve]:
    """(E, E', E0)."""
    ab, c, k = spec.ab, spec.r * spec.ab, spec.k
    outer = BaseCurve("E", Point(ab / 2, 0.0), ab / 2, k * ab / 2)
    left = BaseCurve("E'", Point(c / 2, 0.0), c / 2, k * c / 2)
    right = BaseCurve("E0", Point((c + ab) / 2, 0.0), (ab - c) / 2, k * (ab - c) / 2)
    return outer, left, right


def _invert_circle(cx: float, cy: float, s: float, radius2: float) -> tuple[float, float, float]:
    """Image of a circle avoiding the origin under inversion in the circle of
    squared radius ``radius2`` about the origin."""
    d2 = cx * cx + cy * cy
    f = radius2 / (d2 - s * s)
    return f * cx, f * cy, abs(f) * s


def _circular_chain(ab: float, r: float, count: int) -> list[tuple[float, float, float]]:
    # invert about A: E -> x = L1, E' -> x = L2, E0 -> circle between them
    radius2 = ab * ab
    l1 = radius2 / ab
    l2 = radius2 / (r * ab)
    s = (l2 - l1) / 2
    mid = (l1 + l2) / 2
    return [_invert_circle(mid, 2 * n * s, s, radius2) for n in range(1, count + 1)]


def build_chain(spec: ChainSpec) -> list[ChainElement]:
    out = []
    for n, (cx, cy, rho) in enumerate(_circular_chain(spec.ab, spec.r, spec.count), start=1):
        y = spec.k * cy
        out.append(ChainElement(n, Point(cx, y), rho, spec.k * rho, abs(y)))
    return out


@dataclass
class ElementCheck:
    index: int
    tangency_outer: float
    tangency_inner: float
    tangency_previous: float
    homothety: float
    identity: float

    @property
    def worst_tangency(self) -> float:
        return max(self.tangency_outer, self.tangency_inner, self.tangency_previous)


@dataclass
class ChainReport:
    rows: list[ElementCheck] = field(default_factory=list)
    tol: float = 1e-9

    @property
    def worst(self) -> dict[str, float]:
        if not self.rows:
            return {"tangency": 0.0, "homothety": 0.0, "identity": 0.0}
        return {
            "tangency": max(r.worst_tangency for r in self.rows),
            "homothety": max(r.homothety for r in self.rows),
            "identity": max(r.identity for r in self.rows),
        }

    def failures(self) -> list[tuple[int, str, float]]:
        bad = []
        for row in self.rows:
            for name in ("tangency_outer", "tangency_inner", "tangency_previous", "homothety", "identity"):
                v = getattr(row, name)
                if not v <= self.tol:
                    bad.append((row.index, name, v))
        return bad

    @property
    def ok(self) -> bool:
        return not self.failures()


def _squashed(center: Point, rx: float, k: float) -> tuple[float, float, float]:
    return center.x, center.y / k, rx


def verify_chain(spec: ChainSpec, chain: list[ChainElement], tol: float = 1e-9) -> ChainReport:
    """Residuals of every required tangency (checked as circle tangency in the
    squashed plane), of the homothety ry = k*rx and of h_n = 2 n r_n.

    Tangency and homothety residuals are divided by ab; the identity residual
    is relative to h_n.
    """
    k, ab = spec.k, spec.ab
    outer, left, right = (_squashed(b.center, b.rx, k) for b in base_curves(spec))

    def gap(c1, c2, internal):
        d = math.hypot(c1[0] - c2[0], c1[1] - c2[1])
        target = abs(c1[2] - c2[2]) if internal else c1[2] + c2[2]
        return abs(d - target) / ab

    report = ChainReport(tol=tol)
    prev = right
    for el in chain:
        cur = _squashed(el.center, el.rx, k)
        h = abs(el.center.y)
        report.rows.append(ElementCheck(
            index=el.index,
            tangency_outer=gap(cur, outer, internal=True),
            tangency_inner=gap(cur, left, internal=False),
            tangency_previous=gap(cur, prev, internal=False),
            homothety=abs(el.ry - k * el.rx) / ab,
            identity=abs(h - 2 * el.index * el.ry) / h if h > 0 else math.inf,
        ))
        prev = cur
    return report


def chain_inversion_witness(spec: ChainSpec, i: int) -> tuple[Ellipse, ImplicitCurve, ImplicitCurve]:
    """Inversion ellipse centered at A that fixes E_i, with the images of E
    and E' under it: the two vertical lines tangent to E_i.

    Semi-axes are (t, k t) where t is the tangent length from A to the
    squashed chain circle.
    """
    if not 1 <= i <= spec.count:
        raise IndexOutOfRange(f"chain index {i} outside 1..{spec.count}")
    el = build_chain(spec)[i - 1]
    cx, cy, rho = _squashed(el.center, el.rx, spec.k)
    t2 = cx * cx + cy * cy - rho * rho
    t = math.sqrt(t2)
    ellipse = Ellipse(spec.a_point, t, spec.k * t)
    x_outer = t2 / spec.ab
    x_inner = t2 / (spec.r * spec.ab)
    return (ellipse,
            ImplicitCurve.line(1, 0, -Fraction(x_outer)),
            ImplicitCurve.line(1, 0, -Fraction(x_inner)))


def outer_exact(spec: ChainSpec, precision: int = 10**12) -> InversionEllipseExact:
    """Exact semi-form of E (for homothety checks on chain elements)."""
    half = Fraction(spec.ab / 2).limit_denominator(precision)
    k = Fraction(spec.k).limit_denominator(precision)
    return InversionEllipseExact(half * half, (k * half) ** 2)


def chain_csv(chain: list[ChainElement]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "cx", "cy", "rx", "ry", "h", "ratio"])
    for el in chain:
        ratio = el.h / (el.index * el.ry)
        w.writerow([el.index] + [f"{v:.17g}" for v in (el.center.x, el.center.y, el.rx, el.ry, el.h, ratio)])
    return buf.getvalue()
