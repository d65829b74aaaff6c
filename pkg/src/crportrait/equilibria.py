"""Finite equilibria: local type from P'(z0) and the global count constraints."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

from .errors import ZeroLambdaOnSimpleRoot
from .system import HolomorphicSystem, eval_derivative, roots
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "Stability",
    "Rotation",
    "DicriticalNode",
    "Focus",
    "IsochronousCenter",
    "Degenerate",
    "EquilibriumReport",
    "ConsistencyVerdict",
    "classify_equilibrium",
    "classify_all",
    "global_consistency",
]


class Stability(str, Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"


class Rotation(str, Enum):
    CCW = "ccw"
    CW = "cw"


@dataclass(frozen=True)
class DicriticalNode:
    stability: Stability
    marginal: bool = False
    name = "dicritical_node"


@dataclass(frozen=True)
class Focus:
    stability: Stability
    rotation: Rotation
    name = "focus"


@dataclass(frozen=True)
class IsochronousCenter:
    rotation: Rotation
    omega: float
    marginal: bool = False
    name = "isochronous_center"

    @property
    def period(self) -> float:
        from math import pi

        return 2 * pi / abs(self.omega)


@dataclass(frozen=True)
class Degenerate:
    multiplicity: int
    elliptic_sectors: int
    # (b, a) for the common tangent b*x + a*y = 0; None for a triple root
    tangent_line: tuple[float, float] | None
    name = "degenerate"


EquilibriumKind = Union[DicriticalNode, Focus, IsochronousCenter, Degenerate]


@dataclass(frozen=True)
class EquilibriumReport:
    location: complex
    multiplicity: int
    lam: complex
    kind: EquilibriumKind

    @property
    def is_center(self) -> bool:
        return isinstance(self.kind, IsochronousCenter)

    @property
    def is_node(self) -> bool:
        return isinstance(self.kind, DicriticalNode)

    @property
    def stability(self) -> Stability | None:
        return getattr(self.kind, "stability", None)

    def as_dict(self) -> dict:
        k = self.kind
        d = {"kind": k.name}
        if isinstance(k, (DicriticalNode, Focus)):
            d["stability"] = k.stability.value
        if isinstance(k, (Focus, IsochronousCenter)):
            d["rotation"] = k.rotation.value
        if isinstance(k, IsochronousCenter):
            d["omega"] = k.omega
        if isinstance(k, (DicriticalNode, IsochronousCenter)):
            d["marginal"] = k.marginal
        if isinstance(k, Degenerate):
            d["elliptic_sectors"] = k.elliptic_sectors
            d["tangent_line"] = None if k.tangent_line is None else list(k.tangent_line)
        return {
            "location": [self.location.real, self.location.imag],
            "multiplicity": self.multiplicity,
            "lambda": [self.lam.real, self.lam.imag],
            **d,
        }


def _rotation(beta: float) -> Rotation:
    return Rotation.CCW if beta > 0 else Rotation.CW


def _stability(alpha: float) -> Stability:
    return Stability.STABLE if alpha < 0 else Stability.UNSTABLE


def classify_equilibrium(
    system: HolomorphicSystem, root: tuple[complex, int], tol: Tolerances = DEFAULT
) -> EquilibriumReport:
    z0, k = complex(root[0]), int(root[1])
    if k > 1:
        tangent = None
        if k == 2:
            # P = (z - z0)^2 * c(z);  locally z' ~ c(z0) (z - z0)^2, tangent Im(c (z - z0)) = 0
            c = 1 + 0j
            skipped = 0
            for r in system.roots:
                if r == z0 and skipped < 2:
                    skipped += 1
                    continue
                c *= z0 - r
            a_b = -c
            tangent = (a_b.imag, a_b.real)
        kind = Degenerate(k, 2 * (k - 1), tangent)
        return EquilibriumReport(z0, k, 0j, kind)

    lam = complex(eval_derivative(system, z0))
    alpha, beta = lam.real, lam.imag
    mag = abs(lam)
    if mag == 0:
        raise ZeroLambdaOnSimpleRoot(f"P'({z0}) == 0 at a root counted as simple")
    if abs(alpha) <= tol.class_ * mag:
        kind = IsochronousCenter(_rotation(beta), beta, marginal=alpha != 0)
    elif abs(beta) <= tol.class_ * mag:
        kind = DicriticalNode(_stability(alpha), marginal=beta != 0)
    else:
        kind = Focus(_stability(alpha), _rotation(beta))
    return EquilibriumReport(z0, 1, lam, kind)


def classify_all(system: HolomorphicSystem, tol: Tolerances = DEFAULT) -> list[EquilibriumReport]:
    return [classify_equilibrium(system, r, tol) for r in roots(system, tol)]


@dataclass
class ConsistencyVerdict:
    passed: bool = True
    applicable: bool = True
    diagnostics: list[str] = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.passed = False
        self.diagnostics.append(msg)


def collinearity_defect(points: Sequence[complex]) -> float:
    """|cross(p2 - p1, p3 - p1)| relative to |p2 - p1| |p3 - p1|."""
    p1, p2, p3 = points
    u, v = p2 - p1, p3 - p1
    denom = abs(u) * abs(v)
    if denom == 0:
        return 0.0
    return abs((u.conjugate() * v).imag) / denom


def global_consistency(
    reports: Sequence[EquilibriumReport], degree: int, tol: Tolerances = DEFAULT
) -> ConsistencyVerdict:
    verdict = ConsistencyVerdict()
    simple = [r for r in reports if r.multiplicity == 1]
    if degree != 3 or len(simple) != 3:
        verdict.applicable = False
        verdict.diagnostics.append("count rule applies to cubic systems with three simple roots")
        return verdict
    for label, members in (
        ("centers", [r for r in simple if r.is_center]),
        ("nodes", [r for r in simple if r.is_node]),
    ):
        if len(members) not in (0, 1, 3):
            verdict.fail(f"{len(members)} {label}; expected 0, 1 or 3")
        if len(members) == 3:
            defect = collinearity_defect([r.location for r in members])
            if defect > tol.geom:
                verdict.fail(f"three {label} not collinear (defect {defect:.3e})")
            else:
                verdict.diagnostics.append(f"three {label} collinear (defect {defect:.3e})")
    return verdict
