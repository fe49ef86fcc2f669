"""``ellinv`` command line.

Numbers given on the command line or in a JSON config are read as exact
decimals (``0.25`` becomes ``1/4``) before being handed to the exact curve
algebra; the numeric point map receives their float values.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .curves import (ImplicitCurve, InversionEllipseExact, classify_image, pushforward,
                     sample_image, sample_implicit)
from .errors import (CenterSingular, EllipticInversionError, InvalidSpec, UnsupportedDegree,
                     ZeroCurve)
from .figures import FIGURES, chain_scene, figure_scene
from .geometry import Direction, Point, Tolerance
from .inversion import (INFINITY, Ellipse, directional_radius, invert_point, invert_point_by_polar,
                        invert_point_by_ray, invert_point_by_squash)
from .pappus import ChainSpec, build_chain, chain_csv, verify_chain
from .svg import SvgScene

COMMANDS = ("invert-point", "invert-curve", "chain", "figure", "selftest")
FORMATS = ("json", "csv", "svg")
EXIT_CONFIG = 1
EXIT_DOMAIN = 2

_TOP_KEYS = {"operation", "ellipse", "point", "curve", "chain", "figure", "format", "out", "seed", "tol",
             "scale"}
_ELLIPSE_KEYS = {"a", "b", "center", "phi"}
_CHAIN_KEYS = {"ab", "r", "k", "n"}
_TOL_KEYS = {"rel", "abs_floor", "center_guard"}


class ConfigError(ValueError):
    pass


def exact(value) -> Fraction:
    """Exact rational value of a decimal string, int or Fraction."""
    if isinstance(value, float):
        raise ConfigError(f"refusing inexact float {value!r}; pass a decimal string")
    try:
        return Fraction(str(value).strip()) if not isinstance(value, Fraction) else value
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {value!r}") from exc


@dataclass
class JobConfig:
    operation: str
    a: Fraction = Fraction(5, 2)
    b: Fraction = Fraction(3, 2)
    cx: Fraction = Fraction(0)
    cy: Fraction = Fraction(0)
    phi: Fraction = Fraction(0)
    point: tuple[Fraction, Fraction] | None = None
    curve: str | None = None
    ab: Fraction = Fraction(1)
    r: Fraction = Fraction(2, 3)
    k: Fraction = Fraction(1)
    n: int = 5
    figure: str | None = None
    format: str | None = None
    out: str | None = None
    seed: int = 0
    scale: float = 1.0
    tol: dict = field(default_factory=dict)

    def ellipse(self) -> Ellipse:
        if self.a <= 0 or self.b <= 0:
            raise ConfigError("ellipse semi-axes must be positive")
        return Ellipse(Point(float(self.cx), float(self.cy)), float(self.a), float(self.b), float(self.phi))

    def exact_ellipse(self) -> InversionEllipseExact:
        if self.cx or self.cy or self.phi:
            raise ConfigError("curve inversion needs an origin-centered, axis-aligned ellipse")
        if self.a <= 0 or self.b <= 0:
            raise ConfigError("ellipse semi-axes must be positive")
        return InversionEllipseExact(self.a ** 2, self.b ** 2)

    def tolerance(self) -> Tolerance:
        try:
            return Tolerance(**{k: float(v) for k, v in self.tol.items()})
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def _check_keys(obj, allowed: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def _pair(value, what: str) -> tuple[Fraction, Fraction]:
    if isinstance(value, str):
        parts = value.split(",")
    else:
        parts = list(value)
    if len(parts) != 2:
        raise ConfigError(f"{what} needs two coordinates, got {value!r}")
    return exact(parts[0]), exact(parts[1])


def load_config_file(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    _check_keys(data, _TOP_KEYS, "config")
    return data


def build_config(args: argparse.Namespace) -> JobConfig:
    cfg = JobConfig(operation=args.command)
    if args.config:
        data = load_config_file(args.config)
        op = data.get("operation")
        if op is not None and op != args.command:
            raise ConfigError(f"config operation {op!r} does not match command {args.command!r}")
        if "ellipse" in data:
            ell = data["ellipse"]
            _check_keys(ell, _ELLIPSE_KEYS, "ellipse")
            for key in ("a", "b", "phi"):
                if key in ell:
                    setattr(cfg, key, exact(ell[key]))
            if "center" in ell:
                cfg.cx, cfg.cy = _pair(ell["center"], "ellipse center")
        if "chain" in data:
            ch = data["chain"]
            _check_keys(ch, _CHAIN_KEYS, "chain")
            for key in ("ab", "r", "k"):
                if key in ch:
                    setattr(cfg, key, exact(ch[key]))
            if "n" in ch:
                cfg.n = _int(ch["n"], "chain.n")
        if "point" in data:
            cfg.point = _pair(data["point"], "point")
        for key in ("curve", "figure", "format", "out"):
            if key in data:
                if not isinstance(data[key], str):
                    raise ConfigError(f"{key} must be a string")
                setattr(cfg, key, data[key])
        if "seed" in data:
            cfg.seed = _int(data["seed"], "seed")
        if "scale" in data:
            cfg.scale = float(exact(data["scale"]))
        if "tol" in data:
            tol = data["tol"]
            if isinstance(tol, dict):
                _check_keys(tol, _TOL_KEYS, "tol")
                cfg.tol = {k: exact(v) for k, v in tol.items()}
            else:
                cfg.tol = {"rel": exact(tol)}

    for key in ("a", "b", "cx", "cy", "phi", "ab", "r", "k"):
        val = getattr(args, key)
        if val is not None:
            setattr(cfg, key, exact(val))
    if args.point is not None:
        cfg.point = _pair(args.point, "--point")
    if args.n is not None:
        cfg.n = args.n
    for key in ("curve", "format", "out"):
        val = getattr(args, key)
        if val is not None:
            setattr(cfg, key, val)
    if args.figure_id is not None:
        cfg.figure = args.figure_id
    if args.seed is not None:
        cfg.seed = args.seed
    if args.scale is not None:
        cfg.scale = args.scale
    if args.tol is not None:
        cfg.tol = {**cfg.tol, "rel": exact(args.tol)}
    if cfg.format is not None and cfg.format not in FORMATS:
        raise ConfigError(f"unknown format {cfg.format!r}")
    return cfg


def _int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{what} must be an integer")
    return value


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _jsonable_point(p) -> list[float] | str:
    return "infinity" if p is INFINITY else [p.x, p.y]


# -- subcommands ----------------------------------------------------------------

def run_invert_point(cfg: JobConfig) -> dict:
    if cfg.point is None:
        raise ConfigError("invert-point needs --point X,Y")
    e = cfg.ellipse()
    tol = cfg.tolerance()
    p = Point(float(cfg.point[0]), float(cfg.point[1]))
    image = invert_point(e, p)
    record = {"input": [p.x, p.y], "image": _jsonable_point(image),
              "ellipse": {"a": e.a, "b": e.b, "center": [e.center.x, e.center.y], "phi": e.phi}}
    if image is INFINITY:
        record.update(w=None, oracles=None, max_deviation=None)
        return record
    oracles = {"ray": invert_point_by_ray(e, p, tol),
               "polar": invert_point_by_polar(e, p, tol),
               "squash": invert_point_by_squash(e, p, tol)}
    ref = math.hypot(image.x - e.center.x, image.y - e.center.y)
    dev = max(math.hypot(q.x - image.x, q.y - image.y) / ref for q in oracles.values())
    record["w"] = directional_radius(e, Direction.towards(e.center, p)).w
    record["oracles"] = {k: [q.x, q.y] for k, q in oracles.items()}
    record["max_deviation"] = dev
    return record


def run_invert_curve(cfg: JobConfig) -> tuple[dict, str | None]:
    if not cfg.curve:
        raise ConfigError("invert-curve needs --curve in canonical text form")
    try:
        curve = ImplicitCurve.from_text(cfg.curve)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    ex = cfg.exact_ellipse()
    image = pushforward(ex, curve)
    record = {"input_canonical": curve.to_text(), "image_canonical": image.to_text(),
              "class": classify_image(ex, curve).value, "degree": image.degree}
    svg = None
    if cfg.format == "svg":
        e = cfg.ellipse()
        scene = SvgScene(-6.0, 6.0, -4.0, 4.0)
        scene.add_closed([e.point_at(2 * math.pi * i / 240) for i in range(240)], "ellipse", "E")
        window = (scene.xmin, scene.xmax, scene.ymin, scene.ymax)
        src = sample_implicit(curve, window, 400)
        for p in src:
            scene.add_point(p, "point", "source")
        if src:
            for q in sample_image(e, src, tol=cfg.tolerance()):
                scene.add_point(q, "image-point", "image")
        svg = scene.render()
    return record, svg


def run_chain(cfg: JobConfig) -> tuple[str, str]:
    """Returns (payload in the requested format, verification report)."""
    spec = ChainSpec(float(cfg.ab), float(cfg.r), float(cfg.k), cfg.n)
    chain = build_chain(spec)
    report = verify_chain(spec, chain)
    w = report.worst
    lines = [f"chain: {len(chain)} elements, ab={spec.ab:g} r={spec.r:g} k={spec.k:g}",
             f"worst tangency residual {w['tangency']:.3e}",
             f"worst homothety residual {w['homothety']:.3e}",
             f"worst identity residual |h_n - 2 n r_n|/h_n {w['identity']:.3e}",
             "verification: " + ("ok" if report.ok else f"FAILED {report.failures()}")]
    fmt = cfg.format or "csv"
    if fmt == "csv":
        payload = chain_csv(chain)
    elif fmt == "svg":
        payload = chain_scene(spec)[0].render()
    else:
        payload = json.dumps({
            "spec": {"ab": spec.ab, "r": spec.r, "k": spec.k, "n": spec.count},
            "elements": [{"n": el.index, "cx": el.center.x, "cy": el.center.y, "rx": el.rx,
                          "ry": el.ry, "h": el.h, "ratio": el.h / (el.index * el.ry)} for el in chain],
            "worst": w, "ok": report.ok}, indent=2) + "\n"
    return payload, "\n".join(lines) + "\n"


def run_figure(cfg: JobConfig) -> tuple[str, dict]:
    if cfg.figure not in FIGURES:
        raise ConfigError(f"unknown figure id {cfg.figure!r}; choose from {', '.join(FIGURES)}")
    if cfg.figure == "chain":
        spec = ChainSpec(float(cfg.ab), float(cfg.r), float(cfg.k), cfg.n)
        scene, info = chain_scene(spec)
    else:
        if cfg.cx or cfg.cy or cfg.phi:
            raise ConfigError("figures use an origin-centered, axis-aligned ellipse")
        scene, info = figure_scene(cfg.figure, cfg.ellipse())
    return scene.render(), info


def run_selftest(cfg: JobConfig) -> bool:
    from .selftest import run_all

    results = run_all(scale=cfg.scale, seed=cfg.seed, echo=lambda s: print(s, flush=True))
    failed = [r.name for r in results if not r.passed]
    print(f"selftest: {len(results) - len(failed)}/{len(results)} suites passed"
          + (f"; failed: {', '.join(failed)}" if failed else ""))
    return not failed


def _chain_report(report: str, cfg: JobConfig) -> None:
    """Report goes to stdout; when the payload itself is on stdout, CSV gets
    it as ``#`` comment lines and JSON/SVG push it to stderr."""
    if cfg.out:
        sys.stdout.write(report)
    elif (cfg.format or "csv") == "csv":
        sys.stdout.write("".join("# " + ln + "\n" for ln in report.splitlines()))
    else:
        sys.stderr.write(report)


# -- entry point ----------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ellinv", description="Inversion in an ellipse: points, curves, "
                                "Pappus chains and figures.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("figure_id", nargs="?", help="figure id (figure command only)")
    p.add_argument("--config", help="JSON job file; command-line flags override it")
    g = p.add_argument_group("ellipse of inversion")
    for flag in ("a", "b", "cx", "cy", "phi"):
        g.add_argument(f"--{flag}", metavar="R")
    p.add_argument("--point", metavar="X,Y")
    p.add_argument("--curve", metavar="CANONICAL", help='e.g. "1,0:1;0,0:-2" for x - 2 = 0')
    c = p.add_argument_group("Pappus chain")
    c.add_argument("--ab", metavar="R")
    c.add_argument("--r", metavar="R")
    c.add_argument("--k", metavar="R")
    c.add_argument("-n", type=int, metavar="INT")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", metavar="R", help="relative tolerance")
    p.add_argument("--scale", type=float, help="selftest: fraction of the full case counts")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.figure_id is not None and args.command != "figure":
            raise ConfigError(f"unexpected argument {args.figure_id!r}")
        cfg = build_config(args)
        if cfg.operation == "invert-point":
            _emit(json.dumps(run_invert_point(cfg), indent=2) + "\n", cfg.out)
        elif cfg.operation == "invert-curve":
            record, svg = run_invert_curve(cfg)
            _emit(svg if svg is not None else json.dumps(record, indent=2) + "\n", cfg.out)
        elif cfg.operation == "chain":
            payload, report = run_chain(cfg)
            _emit(payload, cfg.out)
            _chain_report(report, cfg)
        elif cfg.operation == "figure":
            svg, info = run_figure(cfg)
            if cfg.format == "json":
                _emit(json.dumps(info, indent=2) + "\n", cfg.out)
            else:
                _emit(svg, cfg.out)
        else:
            return 0 if run_selftest(cfg) else 1
    except (CenterSingular, UnsupportedDegree, InvalidSpec, ZeroCurve) as exc:
        print(f"ellinv: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConfigError, EllipticInversionError, ValueError, KeyError) as exc:
        print(f"ellinv: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
