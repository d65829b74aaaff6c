"""Holomorphic polynomial systems  z' = P(z)  of degree 2 and 3.

A system is stored by its roots in a normalized frame where the polynomial is
monic and the first root sits at the origin.  The affine map back to the
user's coordinates is kept alongside so reports can quote both frames.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._exact import QC as _QC
from .errors import DegreeUnsupported, InputError, ZeroLeadingCoefficient
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "AffineMap",
    "HolomorphicSystem",
    "RootSet",
    "normalize",
    "from_roots",
    "roots",
    "polynomial_roots",
    "eval_field",
    "eval_complex",
    "eval_derivative",
    "real_polynomials",
]


def _check_finite(z: complex, what: str = "value") -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InputError(f"non-finite {what}: {z!r}")
    return z


@dataclass(frozen=True)
class AffineMap:
    """w = scale * (z - shift), taking user coordinates z to normalized w."""

    scale: complex = 1 + 0j
    shift: complex = 0j

    def forward(self, z):
        return self.scale * (z - self.shift)

    def inverse(self, w):
        return w / self.scale + self.shift

    @property
    def is_identity(self) -> bool:
        return self.scale == 1 and self.shift == 0


@dataclass(frozen=True)
class RootSet:
    entries: tuple[tuple[complex, int], ...]

    @property
    def locations(self) -> tuple[complex, ...]:
        return tuple(z for z, _ in self.entries)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class HolomorphicSystem:
    """Monic z' = prod (z - r) with ``roots[0] == 0``, plus the user-frame map."""

    degree: int
    roots: tuple[complex, ...]
    normalization: AffineMap = AffineMap()

    def __post_init__(self):
        if self.degree not in (2, 3):
            raise DegreeUnsupported(f"degree {self.degree} not in {{2, 3}}")
        if len(self.roots) != self.degree:
            raise InputError("number of roots must equal the degree")
        if self.roots[0] != 0:
            raise InputError("first normalized root must be exactly 0")
        for r in self.roots:
            _check_finite(r, "root")

    @property
    def coefficients(self) -> np.ndarray:
        """Monic coefficients, highest degree first."""
        return np.poly(np.asarray(self.roots, dtype=complex))

    @property
    def scale(self) -> float:
        """Largest root modulus, at least 1; a natural length unit for tolerances."""
        return max(1.0, max(abs(r) for r in self.roots))

    def user_point(self, w: complex) -> complex:
        return self.normalization.inverse(w)

    def scaled(self, factor: float) -> "HolomorphicSystem":
        """Same phase portrait with every root divided by ``factor`` > 0.

        w = z/factor turns z' = P(z) into w' = factor**(n-1) * Q(w) with Q monic,
        a positive time change, so orbits and orientation are unchanged.
        """
        return HolomorphicSystem(self.degree, tuple(r / factor for r in self.roots))


# ---------------------------------------------------------------------------
# closed-form roots


def _cbrt(z: complex) -> complex:
    if z == 0:
        return 0j
    r, phi = cmath.polar(z)
    return cmath.rect(r ** (1.0 / 3.0), phi / 3.0)


def _polish(coeffs: Sequence[complex], z: complex, iterations: int = 3) -> complex:
    p = np.polynomial.polynomial
    c = list(reversed(coeffs))
    dc = p.polyder(c)
    for _ in range(iterations):
        f = p.polyval(z, c)
        d = p.polyval(z, dc)
        if d == 0 or f == 0:
            break
        step = f / d
        if not cmath.isfinite(step):
            break
        z_new = z - step
        if abs(p.polyval(z_new, c)) >= abs(f):
            break
        z = z_new
    return z


def _exact_multiple_roots(coeffs: Sequence[complex]):
    """Roots with multiplicity when the float polynomial has an exact multiple root.

    Floats are exact rationals, so the discriminant can be evaluated without
    rounding; returns None when it is nonzero.
    """
    q = [_QC.of(c) for c in coeffs]
    lead = q[0]
    m = [c / lead for c in q[1:]]
    if len(m) == 2:
        b, c = m
        disc = b * b - 4 * c
        if not disc.is_zero():
            return None
        return [(complex(-b / 2), 2)]
    b, c, d = m
    disc = b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d + 18 * b * c * d
    if not disc.is_zero():
        return None
    p = c - b * b / 3
    qq = 2 * b * b * b / 27 - b * c / 3 + d
    shift = -b / 3
    if p.is_zero() and qq.is_zero():
        return [(complex(shift), 3)]
    double = -3 * qq / (2 * p) + shift
    simple = 3 * qq / p + shift
    return [(complex(double), 2), (complex(simple), 1)]


def _cardano(coeffs: Sequence[complex]) -> list[complex]:
    a, b, c, d = (complex(x) for x in coeffs)
    b, c, d = b / a, c / a, d / a
    p = c - b * b / 3
    q = 2 * b**3 / 27 - b * c / 3 + d
    s = cmath.sqrt(q * q / 4 + p**3 / 27)
    w = -q / 2 + s if abs(-q / 2 + s) >= abs(-q / 2 - s) else -q / 2 - s
    C = _cbrt(w)
    omega = complex(-0.5, math.sqrt(3) / 2)
    out = []
    for k in range(3):
        Ck = C * omega**k
        t = 0j if Ck == 0 else Ck - p / (3 * Ck)
        out.append(t - b / 3)
    return out


def _quadratic(coeffs: Sequence[complex]) -> list[complex]:
    a, b, c = (complex(x) for x in coeffs)
    s = cmath.sqrt(b * b - 4 * a * c)
    # pick the sign that avoids cancellation, recover the other root from the product
    qq = -0.5 * (b + s) if abs(b + s) >= abs(b - s) else -0.5 * (b - s)
    if qq == 0:
        return [0j, 0j]
    return [qq / a, c / qq]


def _cluster(values: Sequence[complex], tol: float) -> list[tuple[complex, int]]:
    scale = max((abs(v) for v in values), default=0.0)
    eps = tol * scale
    groups: list[list[complex]] = []
    for v in values:
        for g in groups:
            if abs(g[0] - v) <= eps:
                g.append(v)
                break
        else:
            groups.append([v])
    return [(sum(g) / len(g) if len(g) > 1 else g[0], len(g)) for g in groups]


def polynomial_roots(coeffs: Sequence[complex], tol: Tolerances = DEFAULT) -> RootSet:
    """Closed-form roots of a degree-2 or degree-3 polynomial, with multiplicities.

    Exact multiple roots are detected from the exact discriminant; otherwise the
    quadratic formula / Cardano values are Newton-polished and clustered.
    """
    coeffs = [_check_finite(c, "coefficient") for c in coeffs]
    degree = len(coeffs) - 1
    if degree not in (2, 3):
        raise DegreeUnsupported(f"degree {degree} not in {{2, 3}}")
    if coeffs[0] == 0:
        raise ZeroLeadingCoefficient("leading coefficient is zero")
    exact = _exact_multiple_roots(coeffs)
    if exact is not None:
        return RootSet(tuple(exact))
    raw = _quadratic(coeffs) if degree == 2 else _cardano(coeffs)
    raw = [complex(_polish(coeffs, z)) for z in raw]
    return RootSet(tuple(_cluster(raw, tol.mult)))


# ---------------------------------------------------------------------------
# construction


def _order_key(z: complex):
    return (abs(z), cmath.phase(z) % (2 * math.pi))


def _build(entries: list[tuple[complex, int]], lead: complex) -> HolomorphicSystem:
    degree = sum(k for _, k in entries)
    if degree not in (2, 3):
        raise DegreeUnsupported(f"degree {degree} not in {{2, 3}}")
    # the most repeated root goes to the origin; ties keep input order
    first = max(range(len(entries)), key=lambda i: (entries[i][1], -i))
    ordered = [entries[first]] + [e for i, e in enumerate(entries) if i != first]
    shift = ordered[0][0]
    scale = lead if degree == 2 else cmath.sqrt(lead)
    amap = AffineMap(scale=complex(scale), shift=complex(shift))
    normalized: list[complex] = []
    for j, (z, k) in enumerate(ordered):
        w = 0j if j == 0 else complex(amap.forward(z))
        normalized.extend([w] * k)
    return HolomorphicSystem(degree, tuple(normalized), amap)


def normalize(coefficients: Sequence[complex], tol: Tolerances = DEFAULT) -> HolomorphicSystem:
    """Normalize ``a0 z^n + ... `` (highest degree first) to a monic system with a root at 0.

    The map w = s (z - z1) with s**(n-1) = a0 turns z' = a0 prod(z - zk) into
    w' = prod(w - wk).  For n = 2 this is s = a0; for n = 3 the principal square
    root is used (the other branch is the same portrait rotated by pi).
    """
    coefficients = [_check_finite(c, "coefficient") for c in coefficients]
    # strip leading zeros only as far as needed to report the true degree
    while len(coefficients) > 1 and coefficients[0] == 0:
        coefficients = coefficients[1:]
    degree = len(coefficients) - 1
    if degree not in (2, 3):
        if degree < 0 or all(c == 0 for c in coefficients):
            raise ZeroLeadingCoefficient("zero polynomial")
        raise DegreeUnsupported(f"degree {degree} not in {{2, 3}}")
    rs = polynomial_roots(coefficients, tol)
    entries = sorted(rs.entries, key=lambda e: _order_key(e[0]))
    return _build(list(entries), coefficients[0])


def from_roots(
    user_roots: Iterable[complex], lead: complex = 1, tol: Tolerances = DEFAULT
) -> HolomorphicSystem:
    """Build a system from its roots (repeated for multiplicity) and leading coefficient."""
    vals = [_check_finite(z, "root") for z in user_roots]
    lead = _check_finite(lead, "leading coefficient")
    if lead == 0:
        raise ZeroLeadingCoefficient("leading coefficient is zero")
    if len(vals) not in (2, 3):
        raise DegreeUnsupported(f"degree {len(vals)} not in {{2, 3}}")
    return _build(_cluster(vals, tol.mult), lead)


def roots(system: HolomorphicSystem, tol: Tolerances = DEFAULT) -> RootSet:
    """Distinct roots of the normalized polynomial with multiplicities (origin first)."""
    return RootSet(tuple(_cluster(system.roots, tol.mult)))


# ---------------------------------------------------------------------------
# evaluation


def eval_complex(system: HolomorphicSystem, z):
    """P(z) from the root product; works elementwise on numpy arrays."""
    out = 1.0
    for r in system.roots:
        out = out * (z - r)
    return out


def eval_field(system: HolomorphicSystem, x, y):
    """(P, Q) = (Re P(x+iy), Im P(x+iy))."""
    if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
        w = eval_complex(system, np.asarray(x) + 1j * np.asarray(y))
    else:
        w = eval_complex(system, complex(x, y))
    return w.real, w.imag


def eval_derivative(system: HolomorphicSystem, z0) -> complex:
    """P'(z0) = sum_k prod_{j != k} (z0 - r_j)."""
    rs = system.roots
    total = 0
    for k in range(len(rs)):
        term = 1
        for j, r in enumerate(rs):
            if j != k:
                term = term * (z0 - r)
        total = total + term
    return total


def real_polynomials(system: HolomorphicSystem) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient grids ``c[i, j]`` of x**i y**j for P and Q."""
    n = system.degree
    coeffs = system.coefficients[::-1]  # ascending powers of z
    P = np.zeros((n + 1, n + 1))
    Q = np.zeros((n + 1, n + 1))
    for k, a in enumerate(coeffs):
        # (x + iy)^k = sum_j C(k, j) x^(k-j) (iy)^j
        for j in range(k + 1):
            term = a * math.comb(k, j) * (1j**j)
            P[k - j, j] += term.real
            Q[k - j, j] += term.imag
    return P, Q
