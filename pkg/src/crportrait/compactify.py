"""Poincaré compactification of  z' = P(z).

Four charts cover the equator.  Chart k looks along the direction
phi_k = k*pi/2: with  z' = exp(-i phi_k) z = x' + i y'  it uses

    u = y'/x',   v = 1/x'   (x' > 0),

and rescales time by v**(n-1) > 0.  For monic P with roots r_j this gives the
polynomial field

    F(u, v) = exp(i (n-1) phi_k) * prod_j (1 + i u - v r_j exp(-i phi_k))
    du = Im F - u Re F,      dv = -v Re F,

which extends to the equator v = 0.  On the equator dv = 0 and du vanishes only
at u = 0 in the charts with phi_k = j*pi/(n-1): the 2(n-1) equator saddles,
with eigenvalues s(n-1) along the equator and -s across it, s = (-1)**j.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ChartDomainExceeded, OutsideDisk
from .system import HolomorphicSystem
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "PLANE",
    "EquatorSaddle",
    "ChartPoint",
    "equator_saddles",
    "to_disk",
    "from_disk",
    "chart_field",
    "chart_to_plane",
    "plane_to_chart",
    "change_chart",
    "best_chart",
    "chart_jacobian",
    "manifold_series",
    "eval_series",
    "series_radius",
    "chart_to_disk",
    "chart_data",
]

PLANE = "plane"
N_CHARTS = 4
_ROT = (1 + 0j, 1j, -1 + 0j, -1j)  # exp(i k pi/2), exact


def _rot(k: int) -> complex:
    return _ROT[k % 4]


@dataclass(frozen=True)
class EquatorSaddle:
    """Saddle at infinity in direction ``theta``.

    ``stable_inward`` is True when the in-disk separatrix is the stable
    manifold (orbits arrive from the plane), False when it is unstable.
    """

    index: int
    theta: float
    chart: int
    sign: int  # s: +1 stable-inward, -1 unstable-inward
    stable_inward: bool

    @property
    def role(self) -> str:
        return "stable" if self.stable_inward else "unstable"

    @property
    def label(self) -> str:
        return {0: "east", 1: "north", 2: "west", 3: "south"}[self.chart]


@dataclass(frozen=True)
class ChartPoint:
    chart: int | str
    u: float
    v: float


def equator_saddles(system: HolomorphicSystem) -> list[EquatorSaddle]:
    """2(n-1) saddles at theta_j = j pi/(n-1), alternating stable/unstable."""
    n = system.degree
    out = []
    for j in range(2 * (n - 1)):
        chart = j * 2 // (n - 1)
        s = 1 if j % 2 == 0 else -1
        out.append(EquatorSaddle(j, j * math.pi / (n - 1), chart, s, s > 0))
    return out


def to_disk(x, y):
    """Central projection to the sphere followed by orthogonal projection."""
    d = np.sqrt(1.0 + np.square(x) + np.square(y))
    return x / d, y / d


def from_disk(X, Y):
    r2 = np.square(X) + np.square(Y)
    if np.any(np.asarray(r2) >= 1.0):
        raise OutsideDisk("point is not inside the open unit disk")
    d = np.sqrt(1.0 - r2)
    return X / d, Y / d


# ---------------------------------------------------------------------------
# charts


def _chart_F(rot_roots: Sequence[complex], lead: complex, u: float, v: float) -> complex:
    w = complex(1.0, u)
    F = lead
    for r in rot_roots:
        F *= w - v * r
    return F


def chart_data(system: HolomorphicSystem, chart: int) -> tuple[tuple[complex, ...], complex]:
    """Rotated roots and leading factor exp(i (n-1) phi) for ``chart``."""
    rot = _rot(chart)
    lead = _rot(chart * (system.degree - 1))
    return tuple(r / rot for r in system.roots), lead


def chart_field(
    system: HolomorphicSystem, chart_id: int, u: float, v: float, tol: Tolerances = DEFAULT
) -> tuple[float, float]:
    if chart_id not in range(N_CHARTS):
        raise ChartDomainExceeded(f"unknown chart {chart_id!r}")
    if not (-tol.v_max <= v <= tol.v_max):
        raise ChartDomainExceeded(f"v = {v} outside [0, {tol.v_max}]")
    rr, lead = chart_data(system, chart_id)
    F = _chart_F(rr, lead, u, v)
    return F.imag - u * F.real, -v * F.real


def chart_jacobian(system: HolomorphicSystem, chart_id: int, u: float, v: float, h: float = 1e-7) -> np.ndarray:
    """Central-difference Jacobian of ``chart_field`` (used for linearization checks)."""
    rr, lead = chart_data(system, chart_id)

    def f(a, b):
        F = _chart_F(rr, lead, a, b)
        return np.array([F.imag - a * F.real, -b * F.real])

    return np.column_stack([(f(u + h, v) - f(u - h, v)) / (2 * h), (f(u, v + h) - f(u, v - h)) / (2 * h)])


def chart_to_plane(chart: int, u, v):
    """Plane point z for chart coordinates (v > 0)."""
    return _rot(chart) * (1 + 1j * np.asarray(u)) / np.asarray(v) if np.ndim(u) else _rot(chart) * complex(1, u) / v


def plane_to_chart(chart: int, z: complex) -> tuple[float, float]:
    w = z / _rot(chart)
    if w.real <= 0:
        raise ChartDomainExceeded(f"{z} is not in the half plane of chart {chart}")
    return w.imag / w.real, 1.0 / w.real


def best_chart(z: complex) -> int:
    """Chart whose axis is closest to the direction of z."""
    return int(round(cmath.phase(z) / (math.pi / 2))) % 4


def change_chart(src: int, dst: int, u: float, v: float) -> tuple[float, float]:
    """Transition between equator charts; valid on v = 0 too."""
    # direction e^{i phi_src}(1 + iu) seen from chart dst
    w = complex(1, u) * _rot(src) / _rot(dst)
    if w.real <= 0:
        raise ChartDomainExceeded(f"direction not visible from chart {dst}")
    return w.imag / w.real, v / w.real


def chart_to_disk(chart: int, u: float, v: float) -> tuple[float, float]:
    # (x', y') / sqrt(1 + |z|^2) with x' = 1/v, y' = u/v
    d = math.sqrt(v * v + 1 + u * u)
    w = _rot(chart) * complex(1, u) / d
    return w.real, w.imag


# ---------------------------------------------------------------------------
# in-disk separatrix as a power series  u = h(v)


def manifold_series(system: HolomorphicSystem, saddle: EquatorSaddle, order: int = 32) -> np.ndarray:
    """Coefficients a_0..a_order of the invariant curve u = h(v) through the saddle.

    Solved order by order from  du(h, v) = h'(v) dv(h, v); a_0 = 0.  Adding
    a_k v^k changes the v^k coefficient of the residual by s (n - 1 + k) a_k.
    """
    rr, lead = chart_data(system, saddle.chart)
    n = system.degree
    s = saddle.sign
    a = np.zeros(order + 1)
    for k in range(1, order + 1):
        # power series of F(h(v), v), truncated at degree k
        F = np.zeros(k + 1, dtype=complex)
        F[0] = lead
        base = 1j * a[: k + 1].astype(complex)
        base[0] += 1
        for r in rr:
            fac = base.copy()
            fac[1] -= r
            F = np.convolve(F, fac)[: k + 1]
        ReF, ImF = F.real, F.imag
        du = ImF - np.convolve(a[: k + 1], ReF)[: k + 1]
        dv = -np.concatenate([[0.0], ReF[:k]])
        hp = np.arange(1, k + 1) * a[1 : k + 1]  # h' coefficients, degree k-1
        E = du - np.convolve(hp, dv)[: k + 1]
        a[k] = -E[k] / (s * (n - 1 + k))
    return a


def eval_series(a: np.ndarray, v):
    return np.polynomial.polynomial.polyval(v, a)


def series_radius(a: np.ndarray, eps: float = 1e-14) -> float:
    """Largest v for which the last few terms are below ``eps`` (a safe evaluation range)."""
    tail = [abs(c) for c in a[-4:] if c != 0]
    if not tail:
        return 1.0
    k0 = len(a) - 4
    r = min((eps / abs(c)) ** (1.0 / (k0 + i)) for i, c in enumerate(a[-4:]) if c != 0)
    return min(r, 1.0)
