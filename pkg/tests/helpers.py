"""Shared fixtures for the test-suite: a gallery of systems and an orbit integrator."""

from __future__ import annotations

import time
from contextlib import contextmanager

import numpy as np

from crportrait._rk import Stepper
from crportrait.system import from_roots

# roots (with repetition) of one representative per portrait type and a few variants
GALLERY = {
    "real_pair": (0, 2),
    "complex_pair": (0, 1 + 2j),
    "imaginary_pair": (0, 2j),
    "dipole": (0, 0),
    "triple": (0, 0, 0),
    "double_1.5i": (0, 0, 1.5j),
    "double_1+2i": (0, 0, 1 + 2j),
    "double_1+i": (0, 0, 1 + 1j),
    "double_1.5+i": (0, 0, 1.5 + 1j),
    "double_1.5": (0, 0, 1.5),
    "diagonal_three": (0, 1 + 1j, 2 + 2j),
    "one_center": (0, -1, -1j),
    "shared_sink": (0, -1, 1 + 1j),
    "shared_source": (0, 1j, -1 - 1j),
}

# three collinear centers on the diagonal; their separatrices lie on 1 - 2x - 2y + 2xy = 0
DIAGONAL = (0, 1 + 1j, 2 + 2j)


def gallery(name: str):
    return from_roots(GALLERY[name])


def oracle_class(roots) -> str:
    """Portrait class from eigenvalue signs alone, independent of tracing.

    Uses P'(z_k) by explicit products and, for three simple roots without
    centers, the count rule: with one sink and two sources the sink receives
    two separatrices, and conversely.
    """
    rs = list(roots)
    n = len(rs)
    distinct = sorted(set(rs), key=lambda z: (rs.count(z), -abs(z)), reverse=True)
    top = max(rs.count(z) for z in rs)
    if n == 2:
        if top == 2:
            return "Q_DEGENERATE_DIPOLE"
        z2 = rs[1]
        return "Q_TWO_CENTERS" if z2.real == 0 else "Q_ANTISADDLE_PAIR"
    if top == 3:
        return "C_TRIPLE_DEGENERATE"
    if top == 2:
        z2 = next(z for z in rs if rs.count(z) == 1)
        a, b = z2.real, z2.imag
        if a * b != 0 and a * a == b * b:
            return "C_DOUBLE_WITH_CENTER"
        return "C_DOUBLE_WITH_SINK" if a * a - b * b < 0 else "C_DOUBLE_WITH_SOURCE"
    lams = []
    for i, z in enumerate(rs):
        p = 1
        for j, w in enumerate(rs):
            if j != i:
                p *= z - w
        lams.append(complex(p))
    centers = sum(1 for l in lams if l.real == 0)
    if centers == 3:
        return "C_THREE_CENTERS"
    if centers == 1:
        return "C_ONE_CENTER_SOURCE_SINK"
    sinks = sum(1 for l in lams if l.real < 0)
    return "C_NO_CENTER_SHARED_SINK" if sinks == 1 else "C_NO_CENTER_SHARED_SOURCE"


def integrate_orbit(system, z0: complex, T: float = 10.0, rtol: float = 1e-12, escape: float = 1e3):
    """Polyline of the orbit of z' = P(z) over original time [0, T].

    Returns None if the orbit leaves |z| < escape (finite-time blow-up).
    """
    rts = system.roots

    def f(z):
        p = 1 + 0j
        for r in rts:
            p *= z - r
        return p

    st = Stepper(f, complex(z0), 1e-3, rtol, rtol)
    t = 0.0
    pts = [complex(z0)]
    while t < T:
        _, _, h = st.advance(min(0.05, T - t))
        t += h
        if abs(st.y) > escape or not np.isfinite(st.y):
            return None
        pts.append(st.y)
    z = np.array(pts)
    return np.column_stack([z.real, z.imag])


# one summary line per acceptance criterion, printed by conftest at the end of the run
ACCEPTANCE: dict[int, str] = {}


@contextmanager
def criterion(k: int, title: str, limit: float | None = None, notes: list[str] | None = None):
    """Record PASS/FAIL for criterion ``k``; also fails it if it runs longer than ``limit`` seconds."""
    t0 = time.perf_counter()
    try:
        yield
        dt = time.perf_counter() - t0
        if limit is not None:
            assert dt < limit, f"took {dt:.2f} s, limit {limit} s"
    except BaseException as e:
        dt = time.perf_counter() - t0
        ACCEPTANCE[k] = f"criterion {k}: FAIL  {title}  ({dt:.2f} s)  {type(e).__name__}: {e}".splitlines()[0]
        raise
    line = f"criterion {k}: PASS  {title}  ({dt:.2f} s)"
    if notes:
        line += "  note: " + "; ".join(notes)
    ACCEPTANCE[k] = line
