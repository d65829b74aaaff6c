"""Phase portraits on the Poincaré disk as SVG."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from skimage.measure import find_contours

from . import compactify as cp
from .darboux import DarbouxIntegral, RationalIntegral, rational_integral
from .equilibria import Degenerate, DicriticalNode, Focus, IsochronousCenter
from .errors import CommensurabilityUndecided, NonRationalIntegral
from .system import HolomorphicSystem
from .topology import SeparatrixConfiguration

__all__ = ["LevelCurve", "RenderOptions", "level_curves", "render_portrait", "eval_rational_grid"]

SIZE = 800
RADIUS = 380.0


@dataclass(frozen=True)
class LevelCurve:
    level: float
    plane: np.ndarray  # (N, 2) normalized-frame points
    disk: np.ndarray  # (N, 2) disk points


def eval_rational_grid(H: RationalIntegral, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """H on arrays; singular points come out as inf or nan."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        val = np.ones_like(x, dtype=float)
        for c, m in H.circles:
            val = val * ((x - c.real) ** 2 + (y - c.imag) ** 2) ** float(m)
        if H.numerator is not None:
            val = val * npoly.polyval2d(x, y, H.numerator)
        if H.denominator is not None:
            val = val / npoly.polyval2d(x, y, H.denominator)
    return val


def _gradient(H: RationalIntegral, x: np.ndarray, y: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    gx = (eval_rational_grid(H, x + h, y) - eval_rational_grid(H, x - h, y)) / (2 * h)
    gy = (eval_rational_grid(H, x, y + h) - eval_rational_grid(H, x, y - h)) / (2 * h)
    return gx, gy


def _window(H: RationalIntegral) -> float:
    pts = [abs(c) for c, _ in H.circles] or [0.0]
    return 3 * max(pts) + 2


def level_curves(
    H, levels: Sequence[float], grid: int = 600, R: float | None = None, newton: int = 3
) -> list[LevelCurve]:
    """Marching-squares contours of a rational integral, refined onto the level set.

    Contours are extracted on a ``grid`` x ``grid`` lattice over [-R, R]^2 and
    every vertex is then moved by a few Newton steps along the gradient; vertices
    that do not settle within 1e-3 (1 + |level|) are dropped and the polyline is
    split there.
    """
    if not isinstance(H, RationalIntegral):
        raise NonRationalIntegral("level curves need a rational (single-valued) integral")
    if R is None:
        R = _window(H)
    xs = np.linspace(-R, R, grid)
    X, Y = np.meshgrid(xs, xs)  # rows follow y
    V = eval_rational_grid(H, X, Y)
    mask = np.isfinite(V)
    step = xs[1] - xs[0]
    out = []
    for level in levels:
        for c in find_contours(np.where(mask, V, 0.0), level, mask=mask):
            y = np.interp(c[:, 0], np.arange(grid), xs)
            x = np.interp(c[:, 1], np.arange(grid), xs)
            for _ in range(newton):
                with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                    f = eval_rational_grid(H, x, y) - level
                    gx, gy = _gradient(H, x, y, 1e-6 * max(1.0, R))
                    g2 = gx * gx + gy * gy
                    dx, dy = f * gx / g2, f * gy / g2
                ok = np.isfinite(dx) & np.isfinite(dy) & (np.hypot(dx, dy) < step)
                x = np.where(ok, x - np.where(ok, dx, 0), x)
                y = np.where(ok, y - np.where(ok, dy, 0), y)
            with np.errstate(invalid="ignore", over="ignore"):
                err = np.abs(eval_rational_grid(H, x, y) - level)
            good = np.isfinite(err) & (err <= 1e-3 * (1 + abs(level)))
            # split at dropped vertices
            start = None
            for i in range(len(x) + 1):
                if i < len(x) and good[i]:
                    if start is None:
                        start = i
                elif start is not None:
                    if i - start >= 2:
                        px, py = x[start:i], y[start:i]
                        dX, dY = cp.to_disk(px, py)
                        out.append(LevelCurve(float(level), np.column_stack([px, py]), np.column_stack([dX, dY])))
                    start = None
    return out


def default_levels(H: RationalIntegral, R: float, count: int = 12) -> list[float]:
    xs = np.linspace(-R, R, 101)
    X, Y = np.meshgrid(xs, xs)
    V = eval_rational_grid(H, X, Y)
    V = V[np.isfinite(V)]
    qs = np.quantile(V, np.linspace(0.05, 0.95, count))
    levels = sorted(set(float(f"{q:.6g}") for q in qs))
    if H.circles and sum(H.exponents) == 0 and 1.0 not in levels:
        levels.append(1.0)
    return sorted(levels)


# ---------------------------------------------------------------------------
# SVG


@dataclass
class RenderOptions:
    level_curves: bool = True
    levels: Sequence[float] | None = None
    grid: int = 600
    arrows: bool = True
    title: str | None = None


def _px(X: float, Y: float) -> tuple[str, str]:
    return f"{SIZE / 2 + RADIUS * X:.6f}", f"{SIZE / 2 - RADIUS * Y:.6f}"


def _polyline(path: np.ndarray, cls: str) -> str:
    pts = " ".join(",".join(_px(X, Y)) for X, Y in path)
    return f'<polyline class="{cls}" points="{pts}"/>'


def _arrow(path: np.ndarray, direction: int) -> str | None:
    if len(path) < 3:
        return None
    # arrow at the vertex halfway along the polyline length
    seg = np.hypot(*np.diff(path, axis=0).T)
    cum = np.concatenate([[0], np.cumsum(seg)])
    if cum[-1] == 0:
        return None
    i = int(np.searchsorted(cum, cum[-1] / 2))
    i = min(max(i, 1), len(path) - 1)
    a, b = path[i - 1], path[i]
    d = (b - a) * direction
    L = math.hypot(*d)
    if L == 0:
        return None
    d = d / L
    n = np.array([-d[1], d[0]])
    tip = (a + b) / 2 + d * 0.012
    p1 = tip - d * 0.024 + n * 0.01
    p2 = tip - d * 0.024 - n * 0.01
    tri = [p / max(1.0, math.hypot(*p)) for p in (tip, p1, p2)]  # stay inside the disk
    pts = " ".join(",".join(_px(*p)) for p in tri)
    return f'<polygon class="arrow" points="{pts}"/>'


def _glyph(report) -> str:
    loc = report.location
    X, Y = cp.to_disk(loc.real, loc.imag)
    cx, cy = _px(X, Y)
    k = report.kind
    filled = getattr(k, "stability", None) is not None and k.stability.value == "stable"
    cls = "filled" if filled else "hollow"
    if isinstance(k, DicriticalNode):
        return f'<circle class="node {cls}" cx="{cx}" cy="{cy}" r="6.000000"/>'
    if isinstance(k, Focus):
        x, y = float(cx), float(cy)
        pts = f"{x:.6f},{y - 7:.6f} {x + 7:.6f},{y:.6f} {x:.6f},{y + 7:.6f} {x - 7:.6f},{y:.6f}"
        return f'<polygon class="focus {cls}" points="{pts}"/>'
    if isinstance(k, IsochronousCenter):
        return (
            f'<circle class="center" cx="{cx}" cy="{cy}" r="6.000000"/>'
            f'<circle class="center-dot" cx="{cx}" cy="{cy}" r="1.500000"/>'
        )
    x, y = float(cx), float(cy)
    return f'<rect class="degenerate" x="{x - 5:.6f}" y="{y - 5:.6f}" width="10.000000" height="10.000000"/>'


_STYLE = (
    ".equator{fill:none;stroke:#000;stroke-width:1.5}"
    ".sep{fill:none;stroke:#000;stroke-width:2.2}"
    ".orbit{fill:none;stroke:#555;stroke-width:0.8}"
    ".level{fill:none;stroke:#999;stroke-width:0.6}"
    ".tick{stroke:#000;stroke-width:2.5}"
    ".arrow{fill:#000}"
    ".filled{fill:#000;stroke:#000}"
    ".hollow{fill:#fff;stroke:#000;stroke-width:1.5}"
    ".center{fill:#fff;stroke:#000;stroke-width:1.5}"
    ".center-dot{fill:#000}"
    ".degenerate{fill:#fff;stroke:#000;stroke-width:1.5}"
)


def render_portrait(
    system: HolomorphicSystem, config: SeparatrixConfiguration, options: RenderOptions | None = None
) -> str:
    """SVG document for the configuration (normalized frame).  Byte-deterministic."""
    opt = options or RenderOptions()
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f"<style>{_STYLE}</style>",
    ]
    if opt.title:
        t = opt.title.replace("&", "&amp;").replace("<", "&lt;")
        parts.append(f"<title>{t}</title>")
    c = f"{SIZE / 2:.6f}"
    parts.append(f'<circle class="equator" cx="{c}" cy="{c}" r="{RADIUS:.6f}"/>')
    if opt.level_curves:
        try:
            H = rational_integral(system, config.equilibria)
        except CommensurabilityUndecided:
            H = None
        if isinstance(H, RationalIntegral):
            R = 3 * system.scale + 2
            levels = opt.levels if opt.levels is not None else default_levels(H, R)
            parts.append('<g id="levels">')
            for lc in level_curves(H, levels, opt.grid, R):
                parts.append(_polyline(lc.disk, "level"))
            parts.append("</g>")
    parts.append('<g id="orbits">')
    for reg in config.regions:
        parts.append(_polyline(reg.orbit, "orbit"))
        if opt.arrows:
            a = _arrow(reg.orbit, reg.direction)
            if a:
                parts.append(a)
    parts.append("</g>")
    parts.append('<g id="separatrices">')
    for s in config.separatrices:
        parts.append(_polyline(s.path, "sep"))
        if opt.arrows:
            a = _arrow(s.path, 1 if s.orientation == "unstable" else -1)
            if a:
                parts.append(a)
    parts.append("</g>")
    parts.append('<g id="saddles">')
    for sd in config.saddles:
        x1, y1 = _px(0.94 * math.cos(sd.theta), 0.94 * math.sin(sd.theta))
        x2, y2 = _px(math.cos(sd.theta), math.sin(sd.theta))
        parts.append(f'<line class="tick" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    parts.append("</g>")
    parts.append('<g id="equilibria">')
    for r in config.equilibria:
        parts.append(_glyph(r))
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
