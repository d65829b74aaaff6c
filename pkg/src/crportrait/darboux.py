"""Darboux first integrals of holomorphic systems.

Every linear factor z - z_k of P is an invariant with cofactor P/(z - z_k); a
double (triple) root at the origin adds the exponential factor e^{1/z}
(e^{1/z^2}).  Exponents lambda_k with  sum lambda_k c_k + conj = 0  give the
real integral  prod f_k^lambda_k conj(f_k)^conj(lambda_k), which is assembled
here from power, angle and exponential factors.  When the equilibria allow it
an exact rational integral is produced instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from ._exact import QC, nullspace
from .equilibria import EquilibriumReport, classify_all
from .errors import CommensurabilityUndecided, NoNontrivialSolution, SingularPoint
from .system import HolomorphicSystem, eval_derivative, eval_field, roots
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "Invariant",
    "PowerFactor",
    "AngleFactor",
    "ExpFactor",
    "DarbouxIntegral",
    "RationalIntegral",
    "Absent",
    "structure",
    "build_invariants",
    "solve_exponents",
    "nullspace_exponents",
    "build_integral",
    "rational_integral",
    "integral_residual",
    "eval_integral",
    "eval_along",
    "residue_sum",
]

Grid = np.ndarray  # c[i, j] multiplies x**i * y**j


# ---------------------------------------------------------------------------
# small bivariate polynomial helpers


def _mul2d(a: Grid, b: Grid) -> Grid:
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=np.result_type(a, b))
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            if a[i, j] != 0:
                out[i : i + b.shape[0], j : j + b.shape[1]] += a[i, j] * b
    return out


def _pow2d(a: Grid, k: int) -> Grid:
    out = np.ones((1, 1), dtype=a.dtype)
    for _ in range(k):
        out = _mul2d(out, a)
    return out


def _linear(center: complex, conj: bool = False) -> Grid:
    """Grid of z - c (or its conjugate) as a complex polynomial in x, y."""
    g = np.zeros((2, 2), dtype=complex)
    g[0, 0] = -(center.conjugate() if conj else center)
    g[1, 0] = 1
    g[0, 1] = -1j if conj else 1j
    return g


def _trim(g: Grid) -> Grid:
    g = np.where(np.abs(g) > 0, g, 0.0)
    nz = np.argwhere(g != 0)
    if nz.size == 0:
        return np.zeros((1, 1))
    return g[: nz[:, 0].max() + 1, : nz[:, 1].max() + 1]


def _grid_terms(g: Grid) -> list[list]:
    return [[int(i), int(j), float(g[i, j])] for i, j in zip(*np.nonzero(g))]


def _radius2() -> Grid:
    g = np.zeros((3, 3))
    g[2, 0] = g[0, 2] = 1.0
    return g


# ---------------------------------------------------------------------------
# invariants and exponents


@dataclass(frozen=True)
class Invariant:
    """``form`` is "linear" (h = z - root) or "exponential" (h = exp(1/(z - root)**order))."""

    form: str
    root: complex
    order: int
    cofactor: tuple[complex, ...]  # ascending powers of z

    def label(self) -> str:
        if self.form == "linear":
            return f"z - ({self.root.real:g}{self.root.imag:+g}i)" if self.root else "z"
        return "exp(1/z)" if self.order == 1 else f"exp(1/z^{self.order})"


def structure(system: HolomorphicSystem) -> str:
    """One of Q_SIMPLE, Q_DOUBLE, C_SIMPLE, C_DOUBLE, C_TRIPLE."""
    mults = sorted(roots(system).multiplicities, reverse=True)
    prefix = "Q" if system.degree == 2 else "C"
    suffix = {1: "SIMPLE", 2: "DOUBLE", 3: "TRIPLE"}[mults[0]]
    return f"{prefix}_{suffix}"


def _poly_from_roots_exact(rs: Sequence[complex]) -> list[QC]:
    out = [QC(1)]
    for r in rs:
        q = QC.of(r)
        nxt = [QC(0)] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * q
        out = nxt
    return out


def _cofactors_exact(system: HolomorphicSystem) -> list[tuple[str, complex, int, list[QC]]]:
    n = system.degree
    rs = list(system.roots)
    out = []
    for z0, k in roots(system):
        rest = list(rs)
        rest.remove(z0)
        out.append(("linear", z0, 0, _poly_from_roots_exact(rest)))
    for z0, k in roots(system):
        if k >= 2:
            order = k - 1
            rest = list(rs)
            for _ in range(k):
                rest.remove(z0)
            # d/dt (z - z0)^-order = -order * P / (z - z0)^(order + 1)
            poly = [c * (-order) for c in _poly_from_roots_exact(rest)]
            out.append(("exponential", z0, order, poly))
    padded = []
    for form, z0, order, poly in out:
        poly = poly + [QC(0)] * (n - len(poly))
        padded.append((form, z0, order, poly))
    return padded


def build_invariants(system: HolomorphicSystem) -> list[Invariant]:
    return [
        Invariant(form, complex(z0), order, tuple(complex(c) for c in poly))
        for form, z0, order, poly in _cofactors_exact(system)
    ]


def _equations(cofactors: Sequence[Sequence], real, imag, zero):
    """Real rows of  sum lambda_k c_k + conj = 0  in unknowns (Re l1, Im l1, ...)."""
    n = len(cofactors[0])
    rows = []
    for j in range(n):
        re_row, im_row = [], []
        for c in cofactors:
            cr, ci = real(c[j]), imag(c[j])
            re_row += [cr, -ci]
            im_row += [ci, cr]
        rows.append(re_row)
        if j > 0:
            rows.append(im_row)
    return rows


def nullspace_exponents(system: HolomorphicSystem, method: str = "exact") -> np.ndarray:
    """Unit-modulus-normalized complex null vector of the cofactor equations.

    ``method="exact"`` eliminates over the rationals (every float is one);
    ``method="svd"`` thresholds singular values at 1e-10.
    """
    cof = _cofactors_exact(system)
    K = len(cof)
    if method == "exact":
        rows = _equations([p for *_, p in cof], lambda q: q.re, lambda q: q.im, Fraction(0))
        basis = nullspace(rows, 2 * K)
        if len(basis) != 1:
            raise NoNontrivialSolution(f"null space dimension {len(basis)} != 1")
        vec = np.array([float(v) for v in basis[0]])
    elif method == "svd":
        cofs = [[complex(q) for q in p] for *_, p in cof]
        A = np.array(_equations(cofs, lambda c: c.real, lambda c: c.imag, 0.0))
        _, s, vt = np.linalg.svd(A)
        s_full = np.zeros(2 * K)
        s_full[: len(s)] = s
        small = s_full <= 1e-10 * s_full[0]
        if small.sum() != 1:
            raise NoNontrivialSolution(f"{small.sum()} singular values below threshold")
        vec = vt[-1]
    else:
        raise ValueError(f"unknown method {method!r}")
    lam = vec[0::2] + 1j * vec[1::2]
    lam = lam / np.abs(lam).max()
    return lam


def _canonical_exponents(system: HolomorphicSystem) -> list[complex]:
    kind = structure(system)
    if kind == "Q_SIMPLE":
        return [-1j / eval_derivative(system, z) for z in roots(system).locations]
    if kind == "C_SIMPLE":
        return [1j / eval_derivative(system, z) for z in roots(system).locations]
    if kind == "C_DOUBLE":
        z2 = next(z for z, k in roots(system) if k == 1)
        zb = z2.conjugate()
        return [zb * zb * 1j, -zb * zb * 1j, -zb * (z2 * zb).real * 1j]
    # Q_DOUBLE / C_TRIPLE: only the exponential factor carries weight
    return [0j, 1j]


def solve_exponents(
    system: HolomorphicSystem, invariants: Sequence[Invariant] | None = None, method: str = "exact"
) -> list[complex]:
    """Exponents aligned with ``build_invariants`` order, in closed form.

    The null vector is computed first and the closed form is accepted only if it
    is a real multiple of it.
    """
    if invariants is None:
        invariants = build_invariants(system)
    lam = nullspace_exponents(system, method)
    canon = np.array(_canonical_exponents(system))
    if len(canon) != len(lam) or len(invariants) != len(lam):
        raise NoNontrivialSolution("invariant count mismatch")
    a = np.concatenate([lam.real, lam.imag])
    b = np.concatenate([canon.real, canon.imag])
    r = float(a @ b) / float(b @ b)
    if np.linalg.norm(a - r * b) > 1e-8 * np.linalg.norm(a):
        raise NoNontrivialSolution("closed-form exponents do not solve the cofactor equations")
    return [complex(c) for c in canon]


def residue_sum(system: HolomorphicSystem) -> complex:
    """sum 1/P'(z_k) over simple roots; zero when all roots are simple."""
    return sum(1 / eval_derivative(system, z) for z, k in roots(system) if k == 1)


# ---------------------------------------------------------------------------
# integral representations


@dataclass(frozen=True)
class PowerFactor:
    """((x - a)^2 + (y - b)^2) ** exponent."""

    center: complex
    exponent: float


@dataclass(frozen=True)
class AngleFactor:
    """exp(coefficient * theta), theta the angle of (x - a, y - b)."""

    center: complex
    coefficient: float


@dataclass(frozen=True)
class ExpFactor:
    """exp(numerator / denominator) with real polynomial grids."""

    numerator: Grid
    denominator: Grid
    center: complex = 0j  # where the denominator vanishes

    def __eq__(self, other):
        return (
            isinstance(other, ExpFactor)
            and np.array_equal(self.numerator, other.numerator)
            and np.array_equal(self.denominator, other.denominator)
            and self.center == other.center
        )

    __hash__ = None


Factor = Union[PowerFactor, AngleFactor, ExpFactor]


@dataclass(frozen=True)
class DarbouxIntegral:
    factors: tuple[Factor, ...]
    equivalence: str = ""

    def to_dict(self) -> dict:
        out = []
        for f in self.factors:
            if isinstance(f, PowerFactor):
                out.append({"type": "power", "center": [f.center.real, f.center.imag], "exponent": f.exponent})
            elif isinstance(f, AngleFactor):
                out.append(
                    {"type": "angle", "center": [f.center.real, f.center.imag], "coefficient": f.coefficient}
                )
            else:
                out.append(
                    {
                        "type": "exp",
                        "numerator": _grid_terms(f.numerator),
                        "denominator": _grid_terms(f.denominator),
                    }
                )
        return {"form": "darboux", "factors": out, "equivalence": self.equivalence}


@dataclass(frozen=True)
class RationalIntegral:
    """prod ((x - a_k)^2 + (y - b_k)^2)^m_k  *  numerator / denominator."""

    circles: tuple[tuple[complex, int], ...] = ()
    numerator: Grid | None = None
    denominator: Grid | None = None
    equivalence: str = ""

    def __eq__(self, other):
        if not isinstance(other, RationalIntegral):
            return NotImplemented
        same = lambda a, b: (a is None and b is None) or (
            a is not None and b is not None and np.array_equal(a, b)
        )
        return (
            self.circles == other.circles
            and same(self.numerator, other.numerator)
            and same(self.denominator, other.denominator)
        )

    __hash__ = None

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.circles)

    @property
    def has_nontrivial_denominator(self) -> bool:
        if any(m < 0 for m in self.exponents):
            return True
        d = self.denominator
        return d is not None and np.count_nonzero(d[1:, :]) + np.count_nonzero(d[:, 1:]) > 0

    def to_dict(self) -> dict:
        return {
            "form": "rational",
            "circles": [{"center": [c.real, c.imag], "exponent": m} for c, m in self.circles],
            "numerator": None if self.numerator is None else _grid_terms(self.numerator),
            "denominator": None if self.denominator is None else _grid_terms(self.denominator),
            "equivalence": self.equivalence,
        }


@dataclass(frozen=True)
class Absent:
    reason: str
    conjecture: bool = False

    def to_dict(self) -> dict:
        return {"form": "absent", "reason": self.reason, "conjecture": self.conjecture}


# ---------------------------------------------------------------------------
# construction


def _exp_factor(lam: complex, order: int, center: complex) -> ExpFactor:
    # 2 Re(lam / w^k) = 2 Re(lam * conj(w)^k) / |w|^(2k),  w = z - center
    num = _trim(np.real(2 * lam * _pow2d(_linear(center, conj=True), order)))
    den = _trim(np.real(_pow2d(_mul2d(_linear(center), _linear(center, conj=True)), order)))
    return ExpFactor(num, den, center)


def _rational_degenerate(kind: str) -> RationalIntegral:
    if kind == "Q_DOUBLE":
        num = np.zeros((1, 2))
        num[0, 1] = 1.0
        return RationalIntegral((), num, _radius2(), "y/(x^2+y^2) ~ exp(2y/(x^2+y^2))")
    num = np.zeros((2, 2))
    num[1, 1] = 1.0
    return RationalIntegral((), num, _mul2d(_radius2(), _radius2()), "xy/(x^2+y^2)^2 ~ exp(4xy/(x^2+y^2)^2)")


_SCALES = {
    "Q_SIMPLE": ("|z2|^2", "exponents scaled by |z2|^2"),
    "C_SIMPLE": ("1", "exponents i/P'(z_k)"),
    "C_DOUBLE": ("1/2", "square root of the integral built from the closed-form exponents"),
}


def build_integral(system: HolomorphicSystem, method: str = "exact") -> DarbouxIntegral | RationalIntegral:
    """Real first integral from the solved exponents.

    Each pair (lambda, conj lambda) on z - z_k gives a power factor with exponent
    Re lambda and an angle factor with coefficient -2 Im lambda; exponential
    invariants give exp(2 Re(lambda g/h)).  The result is reported in a fixed
    normal form per root structure (see ``equivalence``).
    """
    kind = structure(system)
    invs = build_invariants(system)
    lams = solve_exponents(system, invs, method)
    if kind in ("Q_DOUBLE", "C_TRIPLE"):
        return _rational_degenerate(kind)
    if kind == "Q_SIMPLE":
        z2 = system.roots[1]
        scale = (z2 * z2.conjugate()).real
    elif kind == "C_DOUBLE":
        scale = 0.5
    else:
        scale = 1.0
    factors: list[Factor] = []
    for inv, lam in zip(invs, lams):
        lam = lam * scale
        if inv.form == "linear":
            if lam.real != 0:
                factors.append(PowerFactor(inv.root, lam.real))
            if lam.imag != 0:
                factors.append(AngleFactor(inv.root, -2 * lam.imag))
        elif lam != 0:
            factors.append(_exp_factor(lam, inv.order, inv.root))
    return DarbouxIntegral(tuple(factors), _SCALES[kind][1])


def _integer_ratios(values: Sequence[float], n_max: int) -> tuple[int, ...]:
    """Smallest integers proportional to ``values`` (first one positive)."""
    base = values[0]
    ratios = []
    for v in values:
        r = v / base
        frac = Fraction(r).limit_denominator(n_max)
        if abs(float(frac) - r) > 1e-9 * max(1.0, abs(r)):
            raise CommensurabilityUndecided(
                f"ratio {r!r} has no approximation with denominator <= {n_max}"
            )
        ratios.append(frac)
    lcm = 1
    for f in ratios:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    ints = [int(f * lcm) for f in ratios]
    g = 0
    for m in ints:
        g = math.gcd(g, m)
    return tuple(m // g for m in ints)


def _node_product(centers: Sequence[complex], ms: Sequence[int]) -> tuple[Grid, Grid]:
    """Im F and Re F for F = prod (z - z_k)^m_k with negative powers conjugated."""
    F = np.ones((1, 1), dtype=complex)
    for c, m in zip(centers, ms):
        F = _mul2d(F, _pow2d(_linear(c, conj=m < 0), abs(m)))
    return _trim(F.imag), _trim(F.real)


def _verify(H: RationalIntegral, system: HolomorphicSystem) -> bool:
    R = system.scale
    pts = [(0.37 * R + 0.11, 1.13 * R - 0.07), (-1.31 * R, 0.29 * R + 0.5), (2.03 * R, -1.7 * R)]
    for x, y in pts:
        try:
            if integral_residual(H, system, (x, y), relative=True) > 1e-8:
                return False
        except SingularPoint:
            continue
    return True


def rational_integral(
    system: HolomorphicSystem,
    reports: Sequence[EquilibriumReport] | None = None,
    tol: Tolerances = DEFAULT,
) -> RationalIntegral | Absent:
    """Exact rational first integral when the equilibria admit one, else :class:`Absent`.

    Raises :class:`CommensurabilityUndecided` when frequencies (node eigenvalues)
    are real but no integer ratio with denominator <= ``tol.n_max`` matches.
    """
    if reports is None:
        reports = classify_all(system, tol)
    kind = structure(system)
    if kind in ("Q_DOUBLE", "C_TRIPLE"):
        return _rational_degenerate(kind)
    if kind == "C_DOUBLE":
        o2 = next(r for r in reports if r.multiplicity == 1)
        if o2.kind.name == "focus":
            return Absent("double root with a focus: no rational integral is expected", conjecture=True)
        return Absent(
            "double root with a node or center: existence not settled; only the Darboux form is given",
            conjecture=True,
        )
    simple = list(reports)
    if any(r.kind.name == "focus" for r in simple):
        return Absent("a focus is present; spiral orbits are not algebraic")
    centers = [r for r in simple if r.is_center]
    nodes = [r for r in simple if r.is_node]
    if len(centers) == len(simple):
        weights = [1.0 / r.lam.imag for r in simple]
        ms = _integer_ratios(weights, tol.n_max)
        if sum(ms) != 0:
            raise CommensurabilityUndecided(f"exponents {ms} do not sum to zero")
        H = RationalIntegral(
            tuple((r.location, m) for r, m in zip(simple, ms)),
            equivalence="integer exponents proportional to 1/omega_k",
        )
    elif len(nodes) == len(simple):
        if kind == "Q_SIMPLE":
            a = simple[1].location.real
            num = np.zeros((1, 2))
            num[0, 1] = 1.0
            den = np.zeros((3, 3))
            den[2, 0] = den[0, 2] = 1.0
            den[1, 0] = -a
            H = RationalIntegral((), num, den, "y/(x(x-a)+y^2) ~ exp(2a(theta_2 - theta_1))")
        else:
            weights = [1.0 / r.lam.real for r in simple]
            ms = _integer_ratios(weights, tol.n_max)
            if sum(ms) != 0:
                raise CommensurabilityUndecided(f"exponents {ms} do not sum to zero")
            num, den = _node_product([r.location for r in simple], ms)
            H = RationalIntegral((), num, den, f"tan(sum m_k theta_k), m = {list(ms)}")
    else:
        return Absent("equilibria mix centers and nodes/foci; no rational integral")
    if not _verify(H, system):
        raise CommensurabilityUndecided("integer exponents failed the residual check")
    return H


# ---------------------------------------------------------------------------
# evaluation


def _check_regular(H, x: float, y: float, scale: float, tol: Tolerances) -> None:
    eps = tol.sing * scale
    centers = []
    if isinstance(H, DarbouxIntegral):
        centers = [f.center for f in H.factors]
    else:
        centers = [c for c, _ in H.circles]
    for c in centers:
        if math.hypot(x - c.real, y - c.imag) <= eps:
            raise SingularPoint(f"({x}, {y}) is at a factor center {c}")
    if isinstance(H, RationalIntegral) and H.denominator is not None:
        if npoly.polyval2d(x, y, H.denominator) == 0:
            raise SingularPoint(f"denominator vanishes at ({x}, {y})")


def _darboux_terms(H: DarbouxIntegral, x: float, y: float) -> list[tuple[float, float]]:
    """Gradient of log H split per factor."""
    terms = []
    for f in H.factors:
        if isinstance(f, ExpFactor):
            N = npoly.polyval2d(x, y, f.numerator)
            D = npoly.polyval2d(x, y, f.denominator)
            Nx = npoly.polyval2d(x, y, npoly.polyder(f.numerator, axis=0))
            Ny = npoly.polyval2d(x, y, npoly.polyder(f.numerator, axis=1))
            Dx = npoly.polyval2d(x, y, npoly.polyder(f.denominator, axis=0))
            Dy = npoly.polyval2d(x, y, npoly.polyder(f.denominator, axis=1))
            terms.append((Nx / D, Ny / D))
            terms.append((-N * Dx / D**2, -N * Dy / D**2))
            continue
        dx, dy = x - f.center.real, y - f.center.imag
        r2 = dx * dx + dy * dy
        if isinstance(f, PowerFactor):
            terms.append((2 * f.exponent * dx / r2, 2 * f.exponent * dy / r2))
        else:
            terms.append((-f.coefficient * dy / r2, f.coefficient * dx / r2))
    return terms


def _rational_value_and_terms(H: RationalIntegral, x: float, y: float):
    C = 1.0
    for c, m in H.circles:
        C *= ((x - c.real) ** 2 + (y - c.imag) ** 2) ** m
    N = 1.0 if H.numerator is None else npoly.polyval2d(x, y, H.numerator)
    D = 1.0 if H.denominator is None else npoly.polyval2d(x, y, H.denominator)
    value = C * N / D
    terms = []
    for c, m in H.circles:
        dx, dy = x - c.real, y - c.imag
        r2 = dx * dx + dy * dy
        terms.append((value * 2 * m * dx / r2, value * 2 * m * dy / r2))
    if H.numerator is not None:
        Nx = npoly.polyval2d(x, y, npoly.polyder(H.numerator, axis=0))
        Ny = npoly.polyval2d(x, y, npoly.polyder(H.numerator, axis=1))
        terms.append((C * Nx / D, C * Ny / D))
    if H.denominator is not None:
        Dx = npoly.polyval2d(x, y, npoly.polyder(H.denominator, axis=0))
        Dy = npoly.polyval2d(x, y, npoly.polyder(H.denominator, axis=1))
        terms.append((-C * N * Dx / D**2, -C * N * Dy / D**2))
    return value, terms


def integral_residual(
    H: DarbouxIntegral | RationalIntegral,
    system: HolomorphicSystem,
    point: tuple[float, float],
    relative: bool = False,
    tol: Tolerances = DEFAULT,
) -> float:
    """P H_x + Q H_y at ``point`` from analytic (log-)derivatives.

    With ``relative=True`` the result is divided by the sum of the absolute
    values of the individual terms, so 0 means exact cancellation and ~1e-16
    is roundoff.
    """
    x, y = float(point[0]), float(point[1])
    _check_regular(H, x, y, system.scale, tol)
    P, Q = eval_field(system, x, y)
    if isinstance(H, DarbouxIntegral):
        terms = _darboux_terms(H, x, y)
        value = None
    else:
        value, terms = _rational_value_and_terms(H, x, y)
    parts = [P * gx for gx, _ in terms] + [Q * gy for _, gy in terms]
    total = math.fsum(parts)
    if relative:
        scale = math.fsum(abs(p) for p in parts)
        return abs(total) / scale if scale > 0 else 0.0
    if value is None:
        value = eval_integral(H, x, y)
    return total if not isinstance(H, DarbouxIntegral) else value * total


def _log_darboux(H: DarbouxIntegral, xs: np.ndarray, ys: np.ndarray, continuous: bool) -> np.ndarray:
    out = np.zeros_like(xs, dtype=float)
    for f in H.factors:
        if isinstance(f, ExpFactor):
            out += npoly.polyval2d(xs, ys, f.numerator) / npoly.polyval2d(xs, ys, f.denominator)
            continue
        dx, dy = xs - f.center.real, ys - f.center.imag
        if isinstance(f, PowerFactor):
            out += f.exponent * np.log(dx * dx + dy * dy)
        else:
            theta = np.arctan2(dy, dx)
            if continuous:
                theta = np.unwrap(theta)
            out += f.coefficient * theta
    return out


def eval_along(H: DarbouxIntegral | RationalIntegral, path, log: bool = False) -> np.ndarray:
    """H at every vertex of ``path`` with angles continued along the polyline.

    ``log=True`` returns log H for Darboux integrals (avoids overflow).
    """
    pts = np.asarray(path, dtype=float).reshape(-1, 2)
    xs, ys = pts[:, 0], pts[:, 1]
    if isinstance(H, DarbouxIntegral):
        lg = _log_darboux(H, xs, ys, continuous=True)
        return lg if log else np.exp(lg)
    vals = np.array([_rational_value_and_terms(H, x, y)[0] for x, y in zip(xs, ys)])
    return vals


def eval_integral(
    H: DarbouxIntegral | RationalIntegral,
    x: float,
    y: float,
    branch_path=None,
    scale: float = 1.0,
    tol: Tolerances = DEFAULT,
) -> float:
    """Value of H at (x, y).

    Angle factors use the principal angle unless ``branch_path`` (a polyline
    whose last vertex is taken to be (x, y)) is given, in which case the angle
    is continued from the principal value at its first vertex.
    """
    _check_regular(H, x, y, scale, tol)
    if isinstance(H, RationalIntegral):
        return float(_rational_value_and_terms(H, x, y)[0])
    if branch_path is None:
        return float(np.exp(_log_darboux(H, np.array([x]), np.array([y]), continuous=False)[0]))
    pts = np.asarray(branch_path, dtype=float).reshape(-1, 2)
    if not np.allclose(pts[-1], (x, y), rtol=0, atol=0):
        pts = np.vstack([pts, [x, y]])
    return float(eval_along(H, pts)[-1])
