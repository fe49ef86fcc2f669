"""Exact images of lines and conics under inversion in an ellipse.

Curves are bivariate polynomials with rational coefficients, always kept in
a canonical form (integer coefficients, content 1, first term in graded-lex
order positive) so that two curves are equal iff their canonical forms are.

The inversion ellipse is axis-aligned and centered at the origin here. To
push a curve through ``psi`` substitute ``x -> a2 b2 x / rho`` and
``y -> a2 b2 y / rho`` with ``rho = b2 x^2 + a2 y^2``, clear denominators
with ``rho**deg`` and strip every factor of ``rho`` that divides exactly
(``rho`` vanishes only at the origin).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable, Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import (EmptyResult, PreconditionError, SingularAtOrigin,
                     UnsupportedDegree, ZeroCurve)
from .geometry import DEFAULT_TOL, Direction, Point, Tolerance
from .inversion import Ellipse, invert_point

Rational = Fraction
Terms = dict[tuple[int, int], Fraction]


def _grlex_key(mono: tuple[int, int]):
    i, j = mono
    return (-(i + j), -i)


def _clean(terms: Mapping[tuple[int, int], object]) -> Terms:
    out: Terms = {}
    for (i, j), c in terms.items():
        if i < 0 or j < 0:
            raise ValueError(f"negative exponent in term {(i, j)}")
        c = Fraction(c)
        if c:
            out[(int(i), int(j))] = out.get((int(i), int(j)), Fraction(0)) + c
    return {m: c for m, c in out.items() if c}


def _canonical(terms: Terms) -> tuple[tuple[tuple[int, int], Fraction], ...]:
    if not terms:
        raise ZeroCurve("all coefficients vanish")
    den = reduce(math.lcm, (c.denominator for c in terms.values()), 1)
    ints = {m: int(c * den) for m, c in terms.items()}
    g = reduce(math.gcd, (abs(v) for v in ints.values()))
    order = sorted(ints, key=_grlex_key)
    sign = 1 if ints[order[0]] > 0 else -1
    return tuple((m, Fraction(sign * ints[m] // g)) for m in order)


def _mul(p: Terms, q: Terms) -> Terms:
    out: Terms = {}
    for (i1, j1), c1 in p.items():
        for (i2, j2), c2 in q.items():
            m = (i1 + i2, j1 + j2)
            out[m] = out.get(m, Fraction(0)) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _pow(p: Terms, n: int) -> Terms:
    out: Terms = {(0, 0): Fraction(1)}
    for _ in range(n):
        out = _mul(out, p)
    return out


def _divide_exact(num: Terms, den: Terms) -> Terms | None:
    """Quotient num/den if the division is exact, else None (lex order, x > y)."""
    lead = max(den)
    lc = den[lead]
    rem = dict(num)
    quot: Terms = {}
    while rem:
        m = max(rem)
        if m[0] < lead[0] or m[1] < lead[1]:
            return None
        q_m = (m[0] - lead[0], m[1] - lead[1])
        q_c = rem[m] / lc
        quot[q_m] = quot.get(q_m, Fraction(0)) + q_c
        for dm, dc in den.items():
            t = (dm[0] + q_m[0], dm[1] + q_m[1])
            v = rem.get(t, Fraction(0)) - q_c * dc
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return quot


class ImplicitCurve:
    """Canonical bivariate polynomial ``sum c_ij x^i y^j = 0``."""

    __slots__ = ("_terms", "_dict")

    def __init__(self, terms: Mapping[tuple[int, int], object]):
        cleaned = _clean(terms)
        canon = _canonical(cleaned)
        if all(i + j == 0 for (i, j), _ in canon):
            raise ValueError("a curve needs degree >= 1")
        self._terms = canon
        self._dict = dict(canon)

    # -- constructors -----------------------------------------------------
    @classmethod
    def line(cls, m, n, p) -> ImplicitCurve:
        """``m x + n y + p = 0``"""
        return cls({(1, 0): m, (0, 1): n, (0, 0): p})

    @classmethod
    def conic(cls, a, b, c, d, e, f) -> ImplicitCurve:
        """``a x^2 + b xy + c y^2 + d x + e y + f = 0``"""
        return cls({(2, 0): a, (1, 1): b, (0, 2): c, (1, 0): d, (0, 1): e, (0, 0): f})

    @classmethod
    def circle(cls, cx, cy, r) -> ImplicitCurve:
        cx, cy, r = Fraction(cx), Fraction(cy), Fraction(r)
        return cls.conic(1, 0, 1, -2 * cx, -2 * cy, cx * cx + cy * cy - r * r)

    @classmethod
    def from_text(cls, text: str) -> ImplicitCurve:
        """Parse ``"i,j:num/den;..."``; coefficients may also be decimals."""
        terms: dict[tuple[int, int], Fraction] = {}
        for chunk in text.strip().split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                mono, coeff = chunk.split(":")
                i, j = (int(s) for s in mono.split(","))
                c = Fraction(coeff.strip())
            except ValueError as exc:
                raise ValueError(f"bad term {chunk!r} in curve text") from exc
            if (i, j) in terms:
                raise ValueError(f"duplicate monomial {(i, j)} in curve text")
            terms[(i, j)] = c
        return cls(terms)

    # -- accessors ----------------------------------------------------------
    @property
    def terms(self) -> tuple[tuple[tuple[int, int], Fraction], ...]:
        return self._terms

    @property
    def degree(self) -> int:
        return self._terms[0][0][0] + self._terms[0][0][1]

    def coeff(self, i: int, j: int) -> Fraction:
        return self._dict.get((i, j), Fraction(0))

    @property
    def constant(self) -> Fraction:
        return self.coeff(0, 0)

    @property
    def through_origin(self) -> bool:
        return self.constant == 0

    @property
    def linear_part(self) -> tuple[Fraction, Fraction]:
        return self.coeff(1, 0), self.coeff(0, 1)

    def as_dict(self) -> Terms:
        return dict(self._dict)

    def to_text(self) -> str:
        return ";".join(f"{i},{j}:{c}" for (i, j), c in self._terms)

    def __call__(self, x, y):
        """Evaluate exactly for rational arguments, in floats otherwise."""
        return sum(c * x ** i * y ** j for (i, j), c in self._terms)

    def evaluate_float(self, x: float, y: float) -> float:
        return sum(float(c) * x ** i * y ** j for (i, j), c in self._terms)

    def scaled_residual(self, p: Point) -> float:
        """|f(p)| divided by the sum of absolute term magnitudes at p."""
        vals = [float(c) * p.x ** i * p.y ** j for (i, j), c in self._terms]
        scale = sum(abs(v) for v in vals)
        return abs(math.fsum(vals)) / scale if scale else 0.0

    def __eq__(self, other):
        return isinstance(other, ImplicitCurve) and self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self):
        return f"ImplicitCurve({self.to_text()!r})"

    def __str__(self):
        return self.pretty()

    def pretty(self) -> str:
        parts = []
        for (i, j), c in self._terms:
            mono = "*".join(s for s in (_var("x", i), _var("y", j)) if s)
            if not mono:
                parts.append(f"{c}")
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") + " = 0"


def _var(name: str, k: int) -> str:
    if k == 0:
        return ""
    return name if k == 1 else f"{name}^{k}"


@dataclass(frozen=True)
class InversionEllipseExact:
    """Axis-aligned origin-centered ellipse ``x^2/a2 + y^2/b2 = 1``, exactly."""

    a2: Fraction
    b2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a2", Fraction(self.a2))
        object.__setattr__(self, "b2", Fraction(self.b2))
        if self.a2 <= 0 or self.b2 <= 0:
            raise ValueError("a2 and b2 must be positive")

    @classmethod
    def from_ellipse(cls, e: Ellipse) -> InversionEllipseExact:
        if not e.is_standard:
            raise ValueError("exact curve algebra needs an origin-centered, axis-aligned ellipse")
        return cls(Fraction(e.a) ** 2, Fraction(e.b) ** 2)

    def to_ellipse(self) -> Ellipse:
        return Ellipse(a=math.sqrt(self.a2), b=math.sqrt(self.b2))

    @property
    def rho(self) -> Terms:
        return {(2, 0): self.b2, (0, 2): self.a2}

    def curve(self) -> ImplicitCurve:
        return ImplicitCurve({(2, 0): 1 / self.a2, (0, 2): 1 / self.b2, (0, 0): -1})

    def invert(self, u, v) -> tuple[Fraction, Fraction]:
        """Exact closed-form image of (u, v) != (0, 0)."""
        u, v = Fraction(u), Fraction(v)
        den = self.b2 * u * u + self.a2 * v * v
        if den == 0:
            raise ZeroDivisionError("the center has no finite image")
        k = self.a2 * self.b2 / den
        return k * u, k * v


class CurveClass(enum.Enum):
    LINE_THROUGH_CENTER = "LineThroughCenter"
    LINE = "Line"
    ELLIPSE_THROUGH_CENTER = "EllipseThroughCenter"
    HOMOTHETIC_CONIC = "HomotheticConic"
    CUBIC = "Cubic"
    QUARTIC = "Quartic"
    OTHER = "Other"


def pushforward(e: InversionEllipseExact, c: ImplicitCurve) -> ImplicitCurve:
    d = c.degree
    if d > 2:
        raise UnsupportedDegree(f"exact pushforward supports degree <= 2, got {d}")
    ab = e.a2 * e.b2
    rho = e.rho
    rho_pows = [_pow(rho, k) for k in range(d + 1)]
    num: Terms = {}
    for (i, j), coef in c.terms:
        scaled = coef * ab ** (i + j)
        for m, v in rho_pows[d - i - j].items():
            t = (m[0] + i, m[1] + j)
            num[t] = num.get(t, Fraction(0)) + scaled * v
    num = {m: v for m, v in num.items() if v}
    if not num:
        raise ZeroCurve("image polynomial vanishes identically")
    while True:
        q = _divide_exact(num, rho)
        if q is None or not q:
            break
        num = q
    return ImplicitCurve(num)


def _quadratic_part(c: ImplicitCurve) -> tuple[Fraction, Fraction, Fraction]:
    return c.coeff(2, 0), c.coeff(1, 1), c.coeff(0, 2)


def is_homothetic(e: InversionEllipseExact, c: ImplicitCurve) -> bool:
    """Quadratic part proportional to ``x^2/a2 + y^2/b2`` (same semi-form, parallel axes)."""
    if c.degree != 2:
        raise UnsupportedDegree(f"homothety is defined for conics, got degree {c.degree}")
    a, b, cc = _quadratic_part(c)
    return b == 0 and a * e.a2 == cc * e.b2 and a * cc > 0


def homothetic_data(e: InversionEllipseExact, c: ImplicitCurve) -> tuple[Fraction, Fraction, Fraction]:
    """(D, E, F) with c rescaled to ``x^2/a2 + y^2/b2 + D x + E y + F``."""
    if not is_homothetic(e, c):
        raise PreconditionError("curve is not homothetic to the inversion ellipse")
    s = c.coeff(2, 0) * e.a2
    return c.coeff(1, 0) / s, c.coeff(0, 1) / s, c.constant / s


def classify_curve(e: InversionEllipseExact, c: ImplicitCurve) -> CurveClass:
    """Class of a curve in the line/conic taxonomy used for images."""
    d = c.degree
    if d == 1:
        return CurveClass.LINE_THROUGH_CENTER if c.through_origin else CurveClass.LINE
    if d == 2 and is_homothetic(e, c):
        return CurveClass.ELLIPSE_THROUGH_CENTER if c.through_origin else CurveClass.HOMOTHETIC_CONIC
    if d == 3:
        return CurveClass.CUBIC
    if d == 4:
        return CurveClass.QUARTIC
    return CurveClass.OTHER


def classify_image(e: InversionEllipseExact, c: ImplicitCurve) -> CurveClass:
    return classify_curve(e, pushforward(e, c))


def tangent_direction_at_origin(c: ImplicitCurve) -> Direction:
    if not c.through_origin:
        raise PreconditionError("curve does not pass through the origin")
    d, e = c.linear_part
    if d == 0 and e == 0:
        raise SingularAtOrigin("linear part vanishes; the origin is a singular point")
    return Direction(float(e), float(-d))


def _require_line(c: ImplicitCurve, through_origin_ok: bool = False) -> None:
    if c.degree != 1:
        raise PreconditionError(f"expected a line, got degree {c.degree}")
    if not through_origin_ok and c.through_origin:
        raise PreconditionError("line passes through the center of inversion")


def images_orthogonal_at_origin(e: InversionEllipseExact, l1: ImplicitCurve, l2: ImplicitCurve) -> bool:
    _require_line(l1)
    _require_line(l2)
    m1, n1 = pushforward(e, l1).linear_part
    m2, n2 = pushforward(e, l2).linear_part
    return m1 * m2 + n1 * n2 == 0


def common_points_of_images(e: InversionEllipseExact, lines: Sequence[ImplicitCurve], h) -> bool:
    """Every image passes through the origin and through psi(h), exactly."""
    hx, hy = Fraction(h[0]), Fraction(h[1])
    if hx == 0 and hy == 0:
        raise PreconditionError("the common point must differ from the center")
    hx2, hy2 = e.invert(hx, hy)
    for ln in lines:
        _require_line(ln, through_origin_ok=True)
        img = pushforward(e, ln)
        if img.constant != 0 or img(hx2, hy2) != 0:
            return False
    return True


def images_tangent_at_origin(e: InversionEllipseExact, lines: Sequence[ImplicitCurve]) -> bool:
    """Images of parallel lines share the origin and the tangent line there."""
    if len(lines) < 2:
        raise PreconditionError("need at least two lines")
    for ln in lines:
        _require_line(ln)
    m0, n0 = lines[0].linear_part
    for ln in lines[1:]:
        m, n = ln.linear_part
        if m0 * n - n0 * m != 0:
            raise PreconditionError("lines are not parallel")
    images = [pushforward(e, ln) for ln in lines]
    if any(img.constant != 0 for img in images):
        return False
    d0, e0 = images[0].linear_part
    if d0 == 0 and e0 == 0:
        return False
    return all(d0 * img.linear_part[1] - e0 * img.linear_part[0] == 0 for img in images[1:])


# -- sampling ---------------------------------------------------------------

Sampler = Union[Callable[[float], Point], ImplicitCurve, Iterable[Point]]


def sample_parametric(f: Callable[[float], Point], n: int, t0: float = 0.0, t1: float = 1.0) -> list[Point]:
    if n < 2:
        raise ValueError("need at least two samples")
    return [f(t) for t in np.linspace(t0, t1, n)]


def sample_implicit(c: ImplicitCurve, window: tuple[float, float, float, float], n: int) -> list[Point]:
    """Points of c inside ``(xmin, xmax, ymin, ymax)``, found by scanning
    vertical lines (roots in y) and then horizontal lines (roots in x)."""
    xmin, xmax, ymin, ymax = window
    d = c.degree
    out: list[Point] = []

    def roots_along(fixed: float, in_y: bool) -> list[float]:
        coeffs = [0.0] * (d + 1)
        for (i, j), v in c.terms:
            if in_y:
                coeffs[d - j] += float(v) * fixed ** i
            else:
                coeffs[d - i] += float(v) * fixed ** j
        while coeffs and coeffs[0] == 0.0:
            coeffs.pop(0)
        if len(coeffs) < 2:
            return []
        rts = np.roots(coeffs)
        return sorted(r.real for r in rts if abs(r.imag) <= 1e-9 * max(1.0, abs(r)))

    for x in np.linspace(xmin, xmax, n):
        out.extend(Point(float(x), y) for y in roots_along(float(x), True) if ymin <= y <= ymax)
    for y in np.linspace(ymin, ymax, n):
        out.extend(Point(x, float(y)) for x in roots_along(float(y), False) if xmin <= x <= xmax)
    return out


def sample_image(e: Ellipse, source: Sampler, n: int = 200, *, t_range: tuple[float, float] = (0.0, 1.0),
                 window: tuple[float, float, float, float] | None = None,
                 tol: Tolerance = DEFAULT_TOL) -> list[Point]:
    """Images under ``psi`` of samples of ``source``, in sampling order.

    ``source`` is a parametric callable over ``t_range``, an implicit curve
    (needs ``window``), or an explicit iterable of points. Samples within
    the center guard are dropped.
    """
    if callable(source) and not isinstance(source, ImplicitCurve):
        pts = sample_parametric(source, n, *t_range)
    elif isinstance(source, ImplicitCurve):
        if window is None:
            raise ValueError("sampling an implicit curve needs a window")
        pts = sample_implicit(source, window, n)
    else:
        pts = list(source)
    guard = e.guard_radius(tol)
    out = [invert_point(e, p) for p in pts
           if math.hypot(p.x - e.center.x, p.y - e.center.y) >= guard]
    if not out:
        raise EmptyResult("every sample fell inside the center guard")
    return out
