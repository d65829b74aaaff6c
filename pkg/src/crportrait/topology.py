"""Separatrices, separatrix configurations and the global portrait class.

All tracing happens in a copy of the system whose roots are divided by
``system.scale`` so that every finite equilibrium lies in the closed unit disk;
this is a positive time change and leaves orbits unchanged.  Near the
equator the four compactification charts are used, elsewhere the plane with
arc-length time (P/|P|).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence, Union

import numpy as np

from . import compactify as cp
from ._rk import Stepper, hermite
from .equilibria import EquilibriumReport, classify_all
from .errors import ConfigurationInconsistent, NotACenter, TraceBudgetExceeded
from .system import HolomorphicSystem, eval_complex
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "FiniteLimit",
    "SaddleLimit",
    "Separatrix",
    "Region",
    "SeparatrixConfiguration",
    "TopologicalClass",
    "CenterType",
    "NotPeriodic",
    "trace_separatrix",
    "separatrix_configuration",
    "classify_portrait",
    "center_region_type",
    "orbit_period",
]

R_OUT = 4.0  # plane -> chart when |z| exceeds this (scaled frame)
U_SWITCH = 1.5  # chart -> neighbouring chart when |u| exceeds this
H_MAX = 0.25  # longest step, keeps polylines dense enough to draw
V_SERIES = 0.3  # separatrices start on the manifold series up to this v


class TopologicalClass(str, Enum):
    Q_ANTISADDLE_PAIR = "Q_ANTISADDLE_PAIR"
    Q_TWO_CENTERS = "Q_TWO_CENTERS"
    Q_DEGENERATE_DIPOLE = "Q_DEGENERATE_DIPOLE"
    C_TRIPLE_DEGENERATE = "C_TRIPLE_DEGENERATE"
    C_DOUBLE_WITH_CENTER = "C_DOUBLE_WITH_CENTER"
    C_DOUBLE_WITH_SINK = "C_DOUBLE_WITH_SINK"
    C_DOUBLE_WITH_SOURCE = "C_DOUBLE_WITH_SOURCE"
    C_THREE_CENTERS = "C_THREE_CENTERS"
    C_ONE_CENTER_SOURCE_SINK = "C_ONE_CENTER_SOURCE_SINK"
    C_NO_CENTER_SHARED_SINK = "C_NO_CENTER_SHARED_SINK"
    C_NO_CENTER_SHARED_SOURCE = "C_NO_CENTER_SHARED_SOURCE"


class CenterType(str, Enum):
    B1 = "B1"
    B2 = "B2"


@dataclass(frozen=True)
class FiniteLimit:
    index: int  # into the equilibrium reports
    location: complex


@dataclass(frozen=True)
class SaddleLimit:
    index: int  # into the equator saddles


LimitObject = Union[FiniteLimit, SaddleLimit]


@dataclass
class Separatrix:
    saddle: cp.EquatorSaddle
    orientation: str  # "unstable": flows into the disk; "stable": arrives from it
    path: np.ndarray  # (N, 2) disk coordinates, starting at the saddle
    plane: np.ndarray  # (N,) complex, normalized frame
    limit: LimitObject
    length: float = 0.0

    @property
    def is_connection(self) -> bool:
        return isinstance(self.limit, SaddleLimit)


@dataclass
class Region:
    arcs: tuple[int, ...]  # equator arcs (arc j runs from saddle j to j+1)
    sample: tuple[float, float]  # disk point inside the region
    orbit: np.ndarray  # (N, 2) disk polyline of a typical orbit
    direction: int = 1  # +1 if the polyline runs forward in time


@dataclass
class SeparatrixConfiguration:
    system: HolomorphicSystem
    equilibria: list[EquilibriumReport]
    saddles: list[cp.EquatorSaddle]
    separatrices: list[Separatrix]
    regions: list[Region] = field(default_factory=list)
    closed: bool = True
    diagnostics: list[str] = field(default_factory=list)

    @property
    def connections(self) -> list[tuple[int, int]]:
        """Saddle pairs (from unstable side, to stable side) joined by a separatrix."""
        pairs = set()
        for s in self.separatrices:
            if s.is_connection:
                a, b = s.saddle.index, s.limit.index
                pairs.add((a, b) if s.orientation == "unstable" else (b, a))
        return sorted(pairs)

    def limit_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for s in self.separatrices:
            if isinstance(s.limit, FiniteLimit):
                counts[s.limit.index] = counts.get(s.limit.index, 0) + 1
        return counts

    def to_dict(self, max_points: int = 2000) -> dict:
        def dec(path):
            path = np.asarray(path)
            if len(path) > max_points:
                idx = np.unique(np.linspace(0, len(path) - 1, max_points).round().astype(int))
                path = path[idx]
            return [[float(x), float(y)] for x, y in path]

        seps = []
        for s in self.separatrices:
            lim = (
                {"type": "saddle", "index": s.limit.index}
                if s.is_connection
                else {
                    "type": "equilibrium",
                    "index": s.limit.index,
                    "location": [s.limit.location.real, s.limit.location.imag],
                }
            )
            seps.append(
                {"saddle": s.saddle.index, "orientation": s.orientation, "limit": lim, "path": dec(s.path)}
            )
        return {
            "saddles": [
                {"index": sd.index, "theta": sd.theta, "role": sd.role} for sd in self.saddles
            ],
            "separatrices": seps,
            "connections": [list(c) for c in self.connections],
            "regions": [{"arcs": list(r.arcs), "orbit": dec(r.orbit)} for r in self.regions],
            "closed": self.closed,
        }


@dataclass(frozen=True)
class NotPeriodic:
    reason: str

    def __bool__(self) -> bool:
        return False


# ---------------------------------------------------------------------------
# tracing machinery


@dataclass
class _Eq:
    index: int
    loc: complex  # scaled frame
    report: EquilibriumReport
    radius: float  # landing radius, scaled frame


class _Context:
    """Everything about one system that the traces share."""

    def __init__(self, system: HolomorphicSystem, tol: Tolerances, reports=None):
        self.system = system
        self.tol = tol
        self.sigma = system.scale
        self.s = system.scaled(self.sigma)
        self.n = system.degree
        self.rts = self.s.roots
        self.reports = list(reports) if reports is not None else classify_all(system, tol)
        self.saddles = cp.equator_saddles(system)
        self.charts = [cp.chart_data(self.s, k) for k in range(cp.N_CHARTS)]
        self.series = {}
        for sd in self.saddles:
            a = cp.manifold_series(self.s, sd)
            self.series[sd.index] = (a, min(V_SERIES, 0.5 * cp.series_radius(a)))
        self.eqs = [_Eq(i, r.location / self.sigma, r, self._landing_radius(r)) for i, r in enumerate(self.reports)]

    def _landing_radius(self, r: EquilibriumReport) -> float:
        eps = self.tol.land
        if r.multiplicity > 1 or r.is_center:
            return eps
        # P = lam w + c2 w^2 + c3 w^3 about the root (scaled frame).  Inside
        # |w| < rho with |c2| rho + |c3| rho^2 <= |Re lam| / 2 the modulus |w|
        # is strictly monotone, so reaching that ball decides the limit.
        e = r.location / self.sigma
        others = [q for q in self.s.roots if q != e]
        lam = 1 + 0j
        for q in others:
            lam *= e - q
        c2 = sum(e - q for q in others) if self.n == 3 else 1.0
        c3 = 1.0 if self.n == 3 else 0.0
        a = abs(lam.real) / 2
        if c3:
            rho = (-abs(c2) + math.sqrt(abs(c2) ** 2 + 4 * c3 * a)) / (2 * c3)
        else:
            rho = a / abs(c2)
        return max(eps, 0.9 * rho)

    # fields -------------------------------------------------------------
    def plane_field(self, d: float):
        rts = self.rts

        def f(z):
            p = 1 + 0j
            for r in rts:
                p *= z - r
            m = abs(p)
            return d * p / m if m > 0 else 0j

        return f

    def chart_field(self, k: int, d: float):
        rr, lead = self.charts[k]

        def f(w):
            u, v = w.real, w.imag
            F = lead
            b = complex(1.0, u)
            for r in rr:
                F *= b - v * r
            return d * complex(F.imag - u * F.real, -v * F.real)

        return f

    # coordinates ----------------------------------------------------------
    def to_plane(self, mode, w: complex) -> complex:
        """Normalized-frame plane point."""
        if mode == cp.PLANE:
            return w * self.sigma
        return cp._rot(mode) * complex(1, w.real) / w.imag * self.sigma

    def to_disk(self, mode, w: complex) -> tuple[float, float]:
        if mode == cp.PLANE:
            z = w * self.sigma
            d = math.sqrt(1 + z.real * z.real + z.imag * z.imag)
            return z.real / d, z.imag / d
        u, v = w.real, w.imag
        d = math.sqrt(v * v + self.sigma * self.sigma * (1 + u * u))
        q = cp._rot(mode) * complex(1, u) * self.sigma / d
        return q.real, q.imag

    def start_state(self, z: complex):
        """(mode, w) for a normalized-frame plane point."""
        zs = z / self.sigma
        if abs(zs) <= R_OUT:
            return cp.PLANE, zs
        k = cp.best_chart(zs)
        u, v = cp.plane_to_chart(k, zs)
        return k, complex(u, v)


def _segment_distance(a: complex, b: complex, p: complex) -> float:
    ab = b - a
    L = ab.real * ab.real + ab.imag * ab.imag
    if L == 0:
        return abs(p - a)
    t = ((p - a) * ab.conjugate()).real / L
    t = min(1.0, max(0.0, t))
    return abs(a + t * ab - p)


def _ball_entry(a: complex, b: complex, c: complex, r: float) -> complex:
    """First point of segment a->b in the closed ball |z - c| <= r (b if a never leaves it)."""
    ab = b - a
    A = (ab * ab.conjugate()).real
    if abs(a - c) <= r or A == 0:
        return a
    B = ((a - c) * ab.conjugate()).real
    C = abs(a - c) ** 2 - r * r
    disc = max(B * B - A * C, 0.0)
    t = (-B - math.sqrt(disc)) / A
    return a + min(max(t, 0.0), 1.0) * ab


@dataclass
class _Trace:
    points: list  # (mode, w)
    end: str  # "equilibrium" | "saddle" | "closed" | "budget"
    index: int = -1
    length: float = 0.0


class _Sack:
    """Bendixson sack detector for slowly attracting foci and nodes.

    After one revolution about a simple target the orbit arc and the segment
    of the flow normal back to the anchor bound a region.  If the flow crosses
    that segment inward and the target is the only equilibrium inside, the
    region is positively invariant and holds no closed orbit (a closed orbit
    encloses total index one, hence a lone simple root, hence a center), so
    the target is the limit.
    """

    SAMPLES = 24
    MAX_ARC = 4000

    def __init__(self, ctx: _Context, targets, f):
        self.targets = [e for e in targets if e.report.multiplicity == 1 and not e.report.is_center]
        self.locs = [e.loc for e in ctx.eqs]
        self.f = f
        self.anchor = None

    def reset(self, z=None):
        self.anchor = z
        if z is not None:
            self.n = self.f(z)
            self.arc = [z]
            self.wind = [0.0] * len(self.targets)

    def step(self, a: complex, b: complex):
        """Feed the step a -> b; return the trapping target or None."""
        if not self.targets:
            return None
        if self.anchor is None or len(self.arc) > self.MAX_ARC or self.n == 0:
            self.reset(b)
            return None
        for i, e in enumerate(self.targets):
            self.wind[i] += cmath.phase((b - e.loc) / (a - e.loc))
        self.arc.append(b)
        za, n = self.anchor, self.n
        ga, gb = ((a - za) * n.conjugate()).real, ((b - za) * n.conjugate()).real
        if not (ga < 0 <= gb) or max(abs(x) for x in self.wind) < 1.5 * math.pi:
            return None
        q = a + (b - a) * (ga / (ga - gb))
        hit = self._check(q)
        self.reset(b)
        return hit

    def _check(self, q: complex):
        za, n = self.anchor, self.n
        span = abs(q - za)
        if span == 0:
            return None
        for s in np.linspace(0.0, 1.0, self.SAMPLES):
            if (self.f(q + s * (za - q)) * n.conjugate()).real <= 0:
                return None
        loop = self.arc[:-1] + [q]
        poly = np.array([(z.real, z.imag) for z in loop])
        probe = q + 1e-3 * span * n / abs(n)
        pts = np.array([(z.real, z.imag) for z in self.locs + [probe]])
        ins = _inside(poly, pts)
        if not ins[-1] or sum(ins[:-1]) != 1:
            return None
        for i, e in enumerate(self.targets):
            if abs(self.wind[i]) >= 1.5 * math.pi and ins[e.index]:
                return e
        return None


def _run(
    ctx: _Context,
    mode,
    w: complex,
    d: int,
    connect: bool = True,
    closure: tuple[float, float] | None = None,
    raise_on_budget: bool = True,
) -> _Trace:
    """Integrate from (mode, w) in time direction d until a stop condition."""
    tol = ctx.tol
    targets = [
        e
        for e in ctx.eqs
        if e.report.multiplicity > 1
        or e.report.is_center
        or (e.report.stability is not None and (e.report.stability.value == "stable") == (d > 0))
    ]
    f = ctx.plane_field(d) if mode == cp.PLANE else ctx.chart_field(mode, d)
    st = Stepper(f, w, 1e-3, tol.rtol)
    sack = _Sack(ctx, targets, ctx.plane_field(d))
    points = [(mode, w)]
    t = 0.0
    steps = 0
    armed = False
    while True:
        if steps >= tol.max_steps or t >= tol.t_max:
            if raise_on_budget:
                raise TraceBudgetExceeded(f"trace stopped after {steps} steps, time {t:.3g}")
            return _Trace(points, "budget", length=t)
        prev = st.y
        y, _, h = st.advance(H_MAX)
        t += abs(h)
        steps += 1
        if mode == cp.PLANE:
            for e in targets:
                if _segment_distance(prev, y, e.loc) < e.radius:
                    points.append((mode, _ball_entry(prev, y, e.loc, e.radius)))
                    return _Trace(points, "equilibrium", e.index, t)
            points.append((mode, y))
            e = sack.step(prev, y)
            if e is not None:
                return _Trace(points, "equilibrium", e.index, t)
            if abs(y) > R_OUT:
                sack.reset()
                mode = cp.best_chart(y)
                u, v = cp.plane_to_chart(mode, y)
                y = complex(u, v)
                st.reset(ctx.chart_field(mode, d), y)
        else:
            u, v = y.real, y.imag
            points.append((mode, y))
            if connect:
                for sd in ctx.saddles:
                    if sd.chart == mode and sd.sign == d:
                        a, vmax = ctx.series[sd.index]
                        if 0 < v <= vmax and abs(u) < 1 and abs(u - cp.eval_series(a, v)) <= tol.land:
                            return _Trace(points, "saddle", sd.index, t)
            if v > tol.v_max:
                mode_new = cp.PLANE
                y = cp._rot(mode) * complex(1, u) / v
                mode = mode_new
                st.reset(ctx.plane_field(d), y)
            elif abs(u) > U_SWITCH:
                dst = (mode + (1 if u > 0 else -1)) % 4
                u2, v2 = cp.change_chart(mode, dst, u, v)
                mode = dst
                y = complex(u2, v2)
                st.reset(ctx.chart_field(mode, d), y)
        if closure is not None:
            X, Y = ctx.to_disk(mode, y)
            dist = math.hypot(X - closure[0], Y - closure[1])
            if dist > 0.05:
                armed = True
            elif armed and dist < 0.01:
                return _Trace(points, "closed", length=t)


def _series_points(ctx: _Context, sd: cp.EquatorSaddle, v_hi: float, count: int = 40):
    a, _ = ctx.series[sd.index]
    vs = np.geomspace(ctx.tol.seed, v_hi, count)
    return [(sd.chart, complex(float(cp.eval_series(a, v)), float(v))) for v in vs]


def _trace(ctx: _Context, sd: cp.EquatorSaddle) -> Separatrix:
    d = -sd.sign
    _, v1 = ctx.series[sd.index]
    head = _series_points(ctx, sd, v1)
    tr = _run(ctx, head[-1][0], head[-1][1], d)
    pts = head + tr.points[1:]
    if tr.end == "saddle":
        target = ctx.saddles[tr.index]
        # every point already inside the range of the target's series is
        # replaced by the series itself; integration error grows on approach
        a, v1 = ctx.series[target.index]
        rot = cp._rot(target.chart)
        cut, v_cut = len(pts) - 1, tr.points[-1][1].imag
        while cut > len(head):
            m, w = pts[cut - 1]
            z = w if m == cp.PLANE else cp._rot(m) * complex(1, w.real) / w.imag
            q = z / rot
            if q.real <= 0:
                break
            u, v = q.imag / q.real, 1 / q.real
            if not (v <= v1 and abs(u) < 1 and abs(u - cp.eval_series(a, v)) <= ctx.tol.land):
                break
            cut, v_cut = cut - 1, v
        tail = _series_points(ctx, target, v_cut)[::-1]
        pts = pts[:cut] + tail
        limit: LimitObject = SaddleLimit(tr.index)
    else:
        e = ctx.eqs[tr.index]
        limit = FiniteLimit(tr.index, e.report.location)
    path = np.array([ctx.to_disk(m, w) for m, w in pts])
    plane = np.array([ctx.to_plane(m, w) for m, w in pts])
    orient = "unstable" if sd.sign < 0 else "stable"
    return Separatrix(sd, orient, path, plane, limit, tr.length)


def _trace_refined(ctx: _Context, sd: cp.EquatorSaddle, levels: int = 2) -> Separatrix:
    """Trace, retrying at tighter rtol when the budget runs out.

    A separatrix threading a narrow gap between close equilibria can miss a
    saddle connection by a hair and then circle near the equator for ever.
    """
    try:
        return _trace(ctx, sd)
    except TraceBudgetExceeded as err:
        first = err
    fine = ctx
    for _ in range(levels):
        fine = _Context(ctx.system, replace(fine.tol, rtol=fine.tol.rtol / 10), ctx.reports)
        try:
            return _trace(fine, sd)
        except TraceBudgetExceeded:
            pass
    raise first


def _reversed(s: Separatrix, sd: cp.EquatorSaddle) -> Separatrix:
    orient = "unstable" if sd.sign < 0 else "stable"
    return Separatrix(sd, orient, s.path[::-1].copy(), s.plane[::-1].copy(), SaddleLimit(s.saddle.index), s.length)


def trace_separatrix(
    system: HolomorphicSystem,
    saddle: cp.EquatorSaddle | int,
    orientation: str | None = None,
    tol: Tolerances = DEFAULT,
) -> Separatrix:
    """Trace the in-disk separatrix of ``saddle`` to its limit.

    ``orientation`` is optional; if given it must match the saddle's role
    ("stable" or "unstable"), since each equator saddle has exactly one
    separatrix entering the disk.
    """
    ctx = _Context(system, tol)
    sd = ctx.saddles[saddle] if isinstance(saddle, int) else saddle
    if orientation is not None and orientation != ("unstable" if sd.sign < 0 else "stable"):
        raise ValueError(f"saddle {sd.index} has a {sd.role} in-disk separatrix, not {orientation}")
    return _trace(ctx, sd)


# ---------------------------------------------------------------------------
# configuration


def _inside(poly: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Even-odd point-in-polygon for many points."""
    x, y = poly[:, 0], poly[:, 1]
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    px, py = pts[:, 0:1], pts[:, 1:2]
    cond = (y > py) != (y2 > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xi = x + (py - y) * (x2 - x) / (y2 - y)
    return np.sum(cond & (px < xi), axis=1) % 2 == 1


def _arc(t0: float, t1: float, count: int = 64) -> np.ndarray:
    """Points on the unit circle going counterclockwise from t0 to t1."""
    if t1 <= t0:
        t1 += 2 * math.pi
    t = np.linspace(t0, t1, count)
    return np.column_stack([np.cos(t), np.sin(t)])


def _closed_curves(config: SeparatrixConfiguration) -> list[tuple[str, np.ndarray, np.ndarray]]:
    """Jordan curves made of separatrices plus an equator arc.

    Returns (kind, polygon, chord) triples; chord is the separatrix part.
    """
    out = []
    by_limit: dict[int, list[Separatrix]] = {}
    seen = set()
    for s in config.separatrices:
        if s.is_connection:
            key = tuple(sorted((s.saddle.index, s.limit.index)))
            if key in seen:
                continue
            seen.add(key)
            chord = s.path
            t_end = config.saddles[s.limit.index].theta
            poly = np.vstack([chord, _arc(t_end, s.saddle.theta)])
            out.append(("connection", poly, chord))
        else:
            by_limit.setdefault(s.limit.index, []).append(s)
    for idx, seps in sorted(by_limit.items()):
        p = config.equilibria[idx].location
        pd = np.array(cp.to_disk(p.real, p.imag))
        for i in range(len(seps)):
            for j in range(i + 1, len(seps)):
                a, b = seps[i], seps[j]
                chord = np.vstack([a.path, pd, b.path[::-1]])
                poly = np.vstack([chord, _arc(b.saddle.theta, a.saddle.theta)])
                out.append(("fan", poly, chord))
    return out


def _region_samples(config: SeparatrixConfiguration, radius: float) -> np.ndarray:
    th = [sd.theta for sd in config.saddles]
    mids = []
    for j in range(len(th)):
        t0, t1 = th[j], th[(j + 1) % len(th)]
        if t1 <= t0:
            t1 += 2 * math.pi
        mids.append(0.5 * (t0 + t1))
    return radius * np.column_stack([np.cos(mids), np.sin(mids)])


def _group_arcs(config: SeparatrixConfiguration, samples: np.ndarray) -> list[tuple[int, ...]]:
    curves = _closed_curves(config)
    sig = np.zeros((len(samples), len(curves)), dtype=bool)
    for c, (_, poly, _) in enumerate(curves):
        sig[:, c] = _inside(poly, samples)
    groups: dict[tuple, list[int]] = {}
    for j in range(len(samples)):
        groups.setdefault(tuple(sig[j]), []).append(j)
    return sorted(tuple(g) for g in groups.values())


def _region_orbit(ctx: _Context, sample: np.ndarray) -> np.ndarray:
    X, Y = float(sample[0]), float(sample[1])
    x, y = cp.from_disk(X, Y)
    tol = ctx.tol.replace(max_steps=min(ctx.tol.max_steps, 4000), t_max=min(ctx.tol.t_max, 200.0))
    sub = _Context.__new__(_Context)
    sub.__dict__.update(ctx.__dict__)
    sub.tol = tol
    mode, w = ctx.start_state(complex(x, y))
    fwd = _run(sub, mode, w, +1, connect=False, closure=(X, Y), raise_on_budget=False)
    if fwd.end == "closed":
        pts = fwd.points
    else:
        bwd = _run(sub, mode, w, -1, connect=False, raise_on_budget=False)
        pts = bwd.points[::-1] + fwd.points[1:]
    out = np.array([ctx.to_disk(m, q) for m, q in pts])
    if fwd.end == "equilibrium":
        e = ctx.eqs[fwd.index].report.location
        out = np.vstack([out, cp.to_disk(e.real, e.imag)])
    return out


def separatrix_configuration(
    system: HolomorphicSystem,
    tol: Tolerances = DEFAULT,
    reports: Sequence[EquilibriumReport] | None = None,
    sample_regions: bool = True,
) -> SeparatrixConfiguration:
    """Trace all 2(n-1) separatrices and sample one orbit per canonical region.

    Canonical regions all reach the equator (every separatrix has one end at an
    equator saddle, so no Jordan curve of separatrices avoids it); they are
    found by grouping the equator arcs between consecutive saddles according
    to which separatrix-bounded curves contain them.
    """
    ctx = _Context(system, tol, reports)
    seps: list[Separatrix | None] = [None] * len(ctx.saddles)
    stuck = []
    for sd in ctx.saddles:
        if seps[sd.index] is not None:
            continue
        try:
            s = _trace_refined(ctx, sd)
        except TraceBudgetExceeded as err:
            stuck.append(err)
            continue
        seps[sd.index] = s
        # a saddle connection is the separatrix of both of its saddles; near
        # a center the integration may not land from the other end on its own
        if s.is_connection and seps[s.limit.index] is None:
            seps[s.limit.index] = _reversed(s, ctx.saddles[s.limit.index])
    if any(s is None for s in seps):
        raise stuck[0]
    config = SeparatrixConfiguration(system, ctx.reports, ctx.saddles, seps)
    # closure: every connection must be seen from both ends
    for s in seps:
        if s.is_connection:
            other = seps[s.limit.index]
            if not (other.is_connection and other.limit.index == s.saddle.index):
                config.closed = False
                config.diagnostics.append(
                    f"saddle {s.saddle.index} reaches saddle {s.limit.index} but not conversely"
                )
    if sample_regions:
        samples = _region_samples(config, 0.99)
        for arcs in _group_arcs(config, samples):
            orbit = _region_orbit(ctx, samples[arcs[0]])
            config.regions.append(Region(arcs, (float(samples[arcs[0]][0]), float(samples[arcs[0]][1])), orbit))
    return config


# ---------------------------------------------------------------------------
# classification


def classify_portrait(config: SeparatrixConfiguration) -> TopologicalClass:
    reps = config.equilibria
    n = config.system.degree
    mults = sorted((r.multiplicity for r in reps), reverse=True)
    centers = [r for r in reps if r.is_center]
    conns = config.connections
    counts = config.limit_counts()
    if len(config.separatrices) != 2 * (n - 1):
        raise ConfigurationInconsistent("wrong number of separatrices")
    if not config.closed:
        raise ConfigurationInconsistent("; ".join(config.diagnostics))
    for i in counts:
        if reps[i].is_center:
            raise ConfigurationInconsistent(f"a separatrix ends at the center {reps[i].location}")

    def need(cond: bool, what: str):
        if not cond:
            raise ConfigurationInconsistent(what)

    if n == 2:
        if mults[0] == 2:
            need(counts.get(0, 0) == 2, "both separatrices should end at the double point")
            return TopologicalClass.Q_DEGENERATE_DIPOLE
        if len(centers) == 2:
            need(len(conns) == 1, "two centers need one saddle connection")
            return TopologicalClass.Q_TWO_CENTERS
        need(not conns and sum(counts.values()) == 2, "antisaddles should absorb both separatrices")
        return TopologicalClass.Q_ANTISADDLE_PAIR
    if mults[0] == 3:
        need(counts.get(0, 0) == 4, "all four separatrices should end at the triple point")
        return TopologicalClass.C_TRIPLE_DEGENERATE
    if mults[0] == 2:
        o2 = next(r for r in reps if r.multiplicity == 1)
        if o2.is_center:
            need(len(conns) >= 1, "a center needs a saddle connection on its boundary")
            return TopologicalClass.C_DOUBLE_WITH_CENTER
        need(not conns, "no saddle connection without a center")
        if o2.stability.value == "stable":
            return TopologicalClass.C_DOUBLE_WITH_SINK
        return TopologicalClass.C_DOUBLE_WITH_SOURCE
    if len(centers) == 3:
        need(len(conns) == 2, "three centers need two saddle connections")
        return TopologicalClass.C_THREE_CENTERS
    if len(centers) == 1:
        need(len(conns) == 1, "one center needs one saddle connection")
        return TopologicalClass.C_ONE_CENTER_SOURCE_SINK
    need(len(centers) == 0 and not conns, "center count must be 0, 1 or 3")
    shared = [i for i, c in counts.items() if c >= 2]
    need(len(shared) == 1 and counts[shared[0]] == 2, f"limit pattern {counts} is not enumerated")
    if reps[shared[0]].stability.value == "stable":
        return TopologicalClass.C_NO_CENTER_SHARED_SINK
    return TopologicalClass.C_NO_CENTER_SHARED_SOURCE


def _bounding_connections(config: SeparatrixConfiguration, point: complex) -> list[np.ndarray]:
    chords = [(poly, chord) for kind, poly, chord in _closed_curves(config) if kind == "connection"]
    pd = np.array([cp.to_disk(point.real, point.imag)])
    out = []
    for i, (_, chord) in enumerate(chords):
        mid = chord[len(chord) // 2 : len(chord) // 2 + 1]
        separated = False
        for j, (poly_j, _) in enumerate(chords):
            if j != i and _inside(poly_j, mid)[0] != _inside(poly_j, pd)[0]:
                separated = True
                break
        if not separated:
            out.append(chord)
    return out


def center_region_type(config: SeparatrixConfiguration, center_index: int) -> CenterType:
    """B1 if the center's region is bounded by one saddle connection, B2 if by two."""
    rep = config.equilibria[center_index]
    if not rep.is_center:
        raise NotACenter(f"equilibrium {center_index} at {rep.location} is not a center")
    k = len(_bounding_connections(config, rep.location))
    if k == 1:
        return CenterType.B1
    if k == 2:
        return CenterType.B2
    raise ConfigurationInconsistent(f"center region bounded by {k} saddle connections")


# ---------------------------------------------------------------------------
# periods


def orbit_period(system: HolomorphicSystem, start: tuple[float, float], tol: Tolerances = DEFAULT):
    """Period of the closed orbit through ``start`` (original time), or NotPeriodic.

    The orbit is integrated until its winding about some center exceeds pi,
    after which the first crossing of the line through ``start`` normal to the
    flow (in the flow direction) closes the orbit, provided it lands back on
    ``start``.
    """
    reports = classify_all(system, tol)
    centers = [r.location for r in reports if r.is_center]
    if not centers:
        return NotPeriodic("the system has no centers, hence no closed orbits")
    z0 = complex(*start)
    rts = system.roots
    scale = system.scale

    def f(z):
        p = 1 + 0j
        for r in rts:
            p *= z - r
        return p

    p0 = f(z0)
    if p0 == 0:
        return NotPeriodic("start is an equilibrium")
    ctx = _Context(system, tol, reports)
    # Closed orbits stay away from every non-center equilibrium; the trap ball
    # of a node/focus is exact, for a multiple root 1% of the scale is used.
    sinks = []
    for e in ctx.eqs:
        if e.report.is_center:
            continue
        rad = e.radius * scale if e.report.multiplicity == 1 else 1e-2 * scale
        if abs(z0 - e.report.location) < rad:
            if e.report.multiplicity == 1:
                return NotPeriodic(f"start is in the basin of {e.report.location}")
            rad = 0.5 * abs(z0 - e.report.location)
        sinks.append((e.report.location, rad))
    g = lambda z: ((z - z0) * p0.conjugate()).real
    st = Stepper(f, z0, 1e-3 / abs(p0), tol.rtol, tol.rtol * abs(z0 - centers[0]) + 1e-300)
    t = 0.0
    wind = [0.0] * len(centers)
    armed = False
    for _ in range(tol.max_steps):
        y0, f0 = st.y, st.k
        y1, f1, h = st.advance()
        t += h
        for i, c in enumerate(centers):
            wind[i] += cmath.phase((y1 - c) / (y0 - c))
        if not armed and max(abs(w) for w in wind) > math.pi:
            armed = True
        if armed and g(y0) < 0 <= g(y1):
            lo, hi = 0.0, 1.0
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if g(hermite(y0, f0, y1, f1, h, mid)) < 0:
                    lo = mid
                else:
                    hi = mid
            s = 0.5 * (lo + hi)
            # a spiral also crosses the section; only a return to start closes
            if abs(hermite(y0, f0, y1, f1, h, s) - z0) > 1e-6 * scale:
                return NotPeriodic("orbit does not close")
            return t - h + s * h
        for loc, rad in sinks:
            if abs(y1 - loc) < rad:
                return NotPeriodic(f"orbit tends to the non-center equilibrium {loc}")
        if abs(y1) > 1e8 * scale:
            return NotPeriodic("orbit escapes to infinity")
        if t > tol.t_max:
            break
    raise TraceBudgetExceeded("no return to the section within the budget")
