"""Scenes for the standard figures: elliptic inverses of lines, conics and
the Pappus chain, sampled through the point map."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from .curves import (ImplicitCurve, InversionEllipseExact, classify_image,
                     pushforward)
from .geometry import DEFAULT_TOL, Direction, Point, Tolerance
from .inversion import Ellipse, directional_radius, invert_point
from .pappus import ChainSpec, base_curves, build_chain
from .svg import SvgScene

FIGURES = ("inversion", "perpendicular", "concurrent", "parallel", "homothetic",
           "line-image", "circle-image", "parabola-image", "hyperbola-image", "chain")

PENCIL_CENTER = (Fraction("-3.18"), Fraction("2.06"))

_LINE_SPAN = 1.566  # tan(1.566) ~ 200 length units along each line


def image_runs(e: Ellipse, f: Callable[[float], Point], t0: float, t1: float, n: int,
               tol: Tolerance = DEFAULT_TOL) -> list[list[Point]]:
    """Sample f on [t0, t1], invert, and split the polyline at samples that
    fall inside the center guard."""
    guard = e.guard_radius(tol)
    runs: list[list[Point]] = [[]]
    for t in np.linspace(t0, t1, n):
        p = f(float(t))
        if math.hypot(p.x - e.center.x, p.y - e.center.y) < guard:
            runs.append([])
            continue
        runs[-1].append(invert_point(e, p))
    return [r for r in runs if len(r) > 1]


def source_runs(f: Callable[[float], Point], t0: float, t1: float, n: int) -> list[Point]:
    return [f(float(t)) for t in np.linspace(t0, t1, n)]


def line_param(curve: ImplicitCurve, through: Point | None = None) -> Callable[[float], Point]:
    """Parametrize ``m x + n y + p = 0`` as base + tan(s) * direction, so equal
    steps in s spread the image evenly near the center."""
    m, n = (float(c) for c in curve.linear_part)
    p = float(curve.constant)
    if through is None:
        k = -p / (m * m + n * n)
        through = Point(k * m, k * n)
    d = Direction(-n, m)
    return lambda s: Point(through.x + math.tan(s) * d.dx, through.y + math.tan(s) * d.dy)


def _ellipse_outline(e: Ellipse, n: int = 240) -> list[Point]:
    return [e.point_at(t) for t in np.linspace(0.0, 2 * math.pi, n, endpoint=False)]


def _base_scene(e: Ellipse, window) -> SvgScene:
    scene = SvgScene(*window)
    scene.add_closed(_ellipse_outline(e), "ellipse", "E")
    scene.add_point(e.center, "point", "O")
    return scene


def _add_line_and_image(scene: SvgScene, e: Ellipse, line: ImplicitCurve, n: int,
                        through: Point | None = None, label: str = "l") -> None:
    f = line_param(line, through)
    scene.add_polyline(source_runs(f, -_LINE_SPAN, _LINE_SPAN, n), "source", label)
    scene.add_polylines(image_runs(e, f, -_LINE_SPAN, _LINE_SPAN, n), "image", label + "'")


def _exact(e: Ellipse) -> InversionEllipseExact:
    return InversionEllipseExact.from_ellipse(e)


def _curve_info(e: Ellipse, curves: list[ImplicitCurve]) -> list[dict]:
    ex = _exact(e)
    return [{"source": c.to_text(), "image": pushforward(ex, c).to_text(),
             "class": classify_image(ex, c).value} for c in curves]


def figure_scene(fig_id: str, e: Ellipse | None = None, n: int = 801,
                 chain: ChainSpec | None = None) -> tuple[SvgScene, dict]:
    """Build the named figure. Returns the scene and a dict of exact data
    (source/image polynomials, special points) for the caller to report."""
    if fig_id not in FIGURES:
        raise KeyError(f"unknown figure {fig_id!r}; choose from {', '.join(FIGURES)}")
    if fig_id == "chain":
        return chain_scene(chain or ChainSpec())
    e = e or Ellipse(a=2.5, b=1.5)
    if not e.is_standard:
        raise ValueError("figures use an origin-centered, axis-aligned ellipse")
    info: dict = {"figure": fig_id}
    if fig_id == "inversion":
        scene = _base_scene(e, (-2.8, 4.2, -1.6, 2.16))
        p = Point(3.72, 1.6)
        pp = invert_point(e, p)
        q = directional_radius(e, Direction.towards(e.center, p)).boundary_point
        scene.add_polyline([e.center, p], "aux", "ray OP")
        for pt, label in ((p, "P"), (pp, "P'"), (q, "Q")):
            scene.add_point(pt, "point", label)
        info.update(P=list(p), P_image=list(pp), Q=list(q))
        return scene, info

    scene = _base_scene(e, (-6.5, 6.5, -4.0, 4.0))
    curves: list[ImplicitCurve] = []
    if fig_id in ("line-image", "perpendicular"):
        curves.append(ImplicitCurve.line(Fraction("3.44"), Fraction("4.92"), Fraction("-7.75")))
        if fig_id == "perpendicular":
            curves.append(ImplicitCurve.line(Fraction("4.92"), Fraction("-3.44"), Fraction("16.4")))
        for i, c in enumerate(curves):
            _add_line_and_image(scene, e, c, n, label=f"l{i + 1}")
    elif fig_id == "concurrent":
        hx, hy = PENCIL_CENTER
        h = Point(float(hx), float(hy))
        # rational slopes keep the pencil exact
        for i, s in enumerate((Fraction(0), Fraction(1, 2), Fraction(2), Fraction(-3), Fraction(-1, 3))):
            c = ImplicitCurve.line(s, -1, hy - s * hx)
            curves.append(c)
            _add_line_and_image(scene, e, c, n, through=h, label=f"l{i + 1}")
        hp = invert_point(e, h)
        scene.add_point(h, "point", "H")
        scene.add_point(hp, "image-point", "H'")
        info.update(H=[float(hx), float(hy)], H_image=list(hp))
    elif fig_id == "parallel":
        for c0 in ("-7.75", "10.16", "19.8", "-23.42", "-13.67"):
            c = ImplicitCurve.line(Fraction("3.44"), Fraction("4.92"), Fraction(c0))
            curves.append(c)
            _add_line_and_image(scene, e, c, n, label=f"l[{c0}]")
    elif fig_id == "homothetic":
        for center, (rx, ry) in (((Fraction("3.5"), Fraction("1.82")), (Fraction("1.875"), Fraction("1.125"))),
                                 ((Fraction("-1.6"), Fraction("0.72")), (Fraction(2), Fraction("1.2")))):
            cx, cy = center
            c = ImplicitCurve.conic(1 / rx ** 2, 0, 1 / ry ** 2, -2 * cx / rx ** 2, -2 * cy / ry ** 2,
                                    cx ** 2 / rx ** 2 + cy ** 2 / ry ** 2 - 1)
            curves.append(c)
            ch = Ellipse(Point(float(cx), float(cy)), float(rx), float(ry))
            scene.add_closed(_ellipse_outline(ch), "source", "chi")
            scene.add_polylines(image_runs(e, ch.point_at, 0.0, 2 * math.pi, n), "image", "chi'")
    elif fig_id == "circle-image":
        cx, cy, r = Fraction("-2.8"), Fraction("1.96"), Fraction("1.2")
        curves.append(ImplicitCurve.circle(cx, cy, r))
        ch = Ellipse(Point(float(cx), float(cy)), float(r), float(r))
        scene.add_closed(_ellipse_outline(ch), "source", "chi")
        scene.add_polylines(image_runs(e, ch.point_at, 0.0, 2 * math.pi, n), "image", "chi'")
    elif fig_id == "parabola-image":
        # y = x^2/3 - 3.25
        curves.append(ImplicitCurve.conic(Fraction(1, 3), 0, 0, 0, -1, Fraction("-3.25")))
        f = lambda s: Point(math.tan(s), math.tan(s) ** 2 / 3 - 3.25)  # noqa: E731
        scene.add_polyline(source_runs(f, -1.5, 1.5, n), "source", "chi")
        scene.add_polylines(image_runs(e, f, -1.5, 1.5, n), "image", "chi'")
    elif fig_id == "hyperbola-image":
        ha, hb = Fraction("2.85"), Fraction("2.03")
        curves.append(ImplicitCurve.conic(1 / ha ** 2, 0, -1 / hb ** 2, 0, 0, -1))
        for sign in (1.0, -1.0):
            f = (lambda sg: lambda t: Point(sg * 2.85 * math.cosh(t), 2.03 * math.sinh(t)))(sign)
            scene.add_polyline(source_runs(f, -3.0, 3.0, n), "source", "chi")
            scene.add_polylines(image_runs(e, f, -3.0, 3.0, n), "image", "chi'")
    info["curves"] = _curve_info(e, curves)
    return scene, info


def chain_scene(spec: ChainSpec, samples: int = 181) -> tuple[SvgScene, dict]:
    chain = build_chain(spec)
    ab, k = spec.ab, spec.k
    top = k * ab / 2
    pad = 0.05 * ab
    scene = SvgScene(-pad, ab + pad, -pad, top + pad)
    for base in base_curves(spec):
        e = base.as_ellipse()
        arc = [e.point_at(t) for t in np.linspace(0.0, math.pi, samples)]
        scene.add_closed(arc, "base", base.name)
    for el in chain:
        scene.add_closed(_ellipse_outline(el.as_ellipse(), samples), "chain", f"E{el.index}")
    return scene, {"figure": "chain", "elements": len(chain)}
