"""Minimal SVG scene: world-coordinate polylines mapped into a fixed pixel box."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import quoteattr

from .geometry import Point

STYLES = {
    "ellipse": 'fill="none" stroke="#000000" stroke-width="1.2"',
    "source": 'fill="none" stroke="#003399" stroke-width="1.2"',
    "image": 'fill="none" stroke="#cc0000" stroke-width="1.2"',
    "chain": 'fill="none" stroke="#cc0000" stroke-width="1"',
    "base": 'fill="none" stroke="#003399" stroke-width="1.2"',
    "aux": 'fill="none" stroke="#777777" stroke-width="0.8" stroke-dasharray="4 3"',
    "point": 'fill="#0000ff" stroke="none"',
    "image-point": 'fill="#cc0000" stroke="none"',
}


@dataclass
class Layer:
    kind: str  # "polyline" | "closed" | "point"
    style: str
    points: list[Point]
    label: str = ""


@dataclass
class SvgScene:
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    width: float = 800.0
    layers: list[Layer] = field(default_factory=list)

    def __post_init__(self):
        vals = (self.xmin, self.xmax, self.ymin, self.ymax, self.width)
        if not all(math.isfinite(v) for v in vals) or self.xmax <= self.xmin or self.ymax <= self.ymin:
            raise ValueError("scene window must be finite and non-empty")

    @property
    def scale(self) -> float:
        return self.width / (self.xmax - self.xmin)

    @property
    def height(self) -> float:
        return (self.ymax - self.ymin) * self.scale

    def contains(self, p: Point) -> bool:
        return self.xmin <= p.x <= self.xmax and self.ymin <= p.y <= self.ymax

    def to_view(self, p: Point) -> tuple[float, float]:
        s = self.scale
        return (p.x - self.xmin) * s, (self.ymax - p.y) * s

    # -- scene building -------------------------------------------------
    def add_polyline(self, pts: list[Point], style: str = "source", label: str = "") -> None:
        """Add a polyline, split wherever it leaves the window."""
        run: list[Point] = []
        for p in pts:
            if self.contains(p):
                run.append(p)
            else:
                if len(run) > 1:
                    self.layers.append(Layer("polyline", style, run, label))
                run = []
        if len(run) > 1:
            self.layers.append(Layer("polyline", style, run, label))

    def add_polylines(self, runs: list[list[Point]], style: str = "image", label: str = "") -> None:
        for run in runs:
            self.add_polyline(run, style, label)

    def add_closed(self, pts: list[Point], style: str = "ellipse", label: str = "") -> None:
        if all(self.contains(p) for p in pts):
            self.layers.append(Layer("closed", style, list(pts), label))
        else:
            self.add_polyline(list(pts) + [pts[0]], style, label)

    def add_point(self, p: Point, style: str = "point", label: str = "") -> None:
        if self.contains(p):
            self.layers.append(Layer("point", style, [p], label))

    @property
    def closed_count(self) -> int:
        return sum(1 for layer in self.layers if layer.kind == "closed")

    # -- output -----------------------------------------------------------
    def render(self) -> str:
        w, h = self._box()
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.3f}" height="{h:.3f}" '
            f'viewBox="0 0 {w:.3f} {h:.3f}">',
            f'<rect x="0" y="0" width="{w:.3f}" height="{h:.3f}" fill="#ffffff"/>',
        ]
        for layer in self.layers:
            style = STYLES.get(layer.style, STYLES["source"])
            cls = f' class={quoteattr(layer.kind)}'
            title = f'<title>{_escape(layer.label)}</title>' if layer.label else ""
            if layer.kind == "point":
                x, y = self._clamped(layer.points[0])
                out.append(f'<circle{cls} cx="{x:.3f}" cy="{y:.3f}" r="3" {style}>{title}</circle>')
                continue
            coords = [self._clamped(p) for p in layer.points]
            d = "M " + " L ".join(f"{x:.3f} {y:.3f}" for x, y in coords)
            if layer.kind == "closed":
                d += " Z"
            out.append(f'<path{cls} d="{d}" {style}>{title}</path>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def _box(self) -> tuple[float, float]:
        # declared size, rounded down to the 3 decimals coordinates are written with
        return math.floor(self.width * 1000) / 1000, math.floor(self.height * 1000) / 1000

    def _clamped(self, p: Point) -> tuple[float, float]:
        # clamp to the declared (rounded) box so no written coordinate leaves it
        x, y = self.to_view(p)
        w, h = self._box()
        return min(max(x, 0.0), w), min(max(y, 0.0), h)


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
