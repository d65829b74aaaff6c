import math

import numpy as np
import pytest

from crportrait.darboux import eval_along, rational_integral
from crportrait.equilibria import classify_all
from crportrait.errors import NotACenter, TraceBudgetExceeded
from crportrait.system import from_roots
from crportrait.tolerances import DEFAULT
from crportrait.topology import (
    CenterType,
    FiniteLimit,
    NotPeriodic,
    SaddleLimit,
    TopologicalClass,
    center_region_type,
    classify_portrait,
    orbit_period,
    separatrix_configuration,
    trace_separatrix,
)

from helpers import GALLERY, DIAGONAL, oracle_class


def hyperbola(z):
    x, y = z.real, z.imag
    return np.abs(1 - 2 * x - 2 * y + 2 * x * y)


def test_trace_quadratic_west():
    sep = trace_separatrix(from_roots([0, 2]), 1, "unstable")
    assert sep.limit == FiniteLimit(0, 0j)
    # the x-axis is invariant: the path stays on it
    assert np.max(np.abs(sep.plane.imag)) <= 1e-12
    assert sep.path[0][0] < -0.99


def test_trace_connection_16():
    sep = trace_separatrix(from_roots(DIAGONAL), 1, "unstable")
    # the branch (x - 1)(y - 1) = 1/2 with x, y > 1 joins north to east
    assert sep.is_connection and sep.limit == SaddleLimit(0)
    assert np.max(hyperbola(sep.plane)) <= 1e-6


def test_trace_double_east():
    sep = trace_separatrix(from_roots([0, 0]), 0, "stable")
    assert sep.limit == FiniteLimit(0, 0j)
    assert np.all(sep.plane.real >= 0)
    assert np.max(np.abs(sep.plane.imag)) <= 1e-12


def test_trace_wrong_orientation():
    with pytest.raises(ValueError):
        trace_separatrix(from_roots([0, 2]), 0, "unstable")


def test_trace_budget():
    with pytest.raises(TraceBudgetExceeded):
        trace_separatrix(from_roots(DIAGONAL), 0, tol=DEFAULT.replace(max_steps=5))


def test_configuration_two_centers():
    cfg = separatrix_configuration(from_roots([0, 2j]))
    assert all(s.is_connection for s in cfg.separatrices)
    assert cfg.connections == [(1, 0)]
    assert cfg.closed
    assert len(cfg.regions) == 2


def test_configuration_shared_sink():
    cfg = separatrix_configuration(from_roots([0, -1, 1 + 1j]))
    north, south = cfg.separatrices[1], cfg.separatrices[3]
    assert north.orientation == south.orientation == "unstable"
    assert north.limit == south.limit == FiniteLimit(0, 0j)


def test_configuration_triple():
    cfg = separatrix_configuration(from_roots([0, 0, 0]))
    assert [s.limit for s in cfg.separatrices] == [FiniteLimit(0, 0j)] * 4
    # half-axes: east, north, west, south
    for s, d in zip(cfg.separatrices, (1, 1j, -1, -1j)):
        w = s.plane / d
        assert np.max(np.abs(w.imag)) <= 1e-12 and np.all(w.real >= 0)


@pytest.mark.parametrize(
    "rts, cls",
    [
        ((0, 1 + 2j), TopologicalClass.Q_ANTISADDLE_PAIR),
        ((0, 0, 1 + 1j), TopologicalClass.C_DOUBLE_WITH_CENTER),
        ((0, 1j, -1 - 1j), TopologicalClass.C_NO_CENTER_SHARED_SOURCE),
    ],
)
def test_classify_examples(rts, cls):
    assert classify_portrait(separatrix_configuration(from_roots(rts), sample_regions=False)) == cls


def test_center_types_16():
    cfg = separatrix_configuration(from_roots(DIAGONAL))
    assert [center_region_type(cfg, i) for i in range(3)] == [CenterType.B1, CenterType.B2, CenterType.B1]


def test_center_type_double_root():
    cfg = separatrix_configuration(from_roots([0, 0, 1 + 1j]))
    assert center_region_type(cfg, 1) == CenterType.B1
    with pytest.raises(NotACenter):
        center_region_type(cfg, 0)


def test_orbit_period_examples():
    s = from_roots([0, 2j])
    assert orbit_period(s, (0.1, 0)) == pytest.approx(math.pi, rel=1e-6)
    assert orbit_period(s, (0.3, 0)) == pytest.approx(math.pi, rel=1e-4)
    r = orbit_period(from_roots([0, 2]), (1, 1))
    assert isinstance(r, NotPeriodic) and not r


def test_orbit_period_elliptic_sector():
    # orbits in the elliptic sectors of a double root return to it, not periodic
    r = orbit_period(from_roots([0, 0, 1 + 1j]), (-0.3, 0.3))
    assert isinstance(r, NotPeriodic)


def _random_roots(rng):
    n = rng.choice([2, 3])
    rts = [0] + list(rng.normal(size=n - 1) + 1j * rng.normal(size=n - 1))
    u = rng.random()
    if n == 3 and u < 0.15:
        rts = [0, 0, rts[1]]
    elif n == 3 and u < 0.3:
        # three centers: z2, z3 on a line through 0 with opposite... collinear roots
        t = rng.uniform(0.2, 0.8)
        rts = [0, t * rts[1], rts[1]]
    elif n == 2 and u < 0.2:
        rts = [0, 1j * rts[1].imag]
    return rts


def test_counts_alternation_soundness():
    rng = np.random.default_rng(30)
    for _ in range(60):
        s = from_roots(_random_roots(rng))
        cfg = separatrix_configuration(s, sample_regions=False)
        n = s.degree
        assert len(cfg.saddles) == len(cfg.separatrices) == 2 * (n - 1)
        orient = [sep.orientation for sep in cfg.separatrices]
        assert all(a != b for a, b in zip(orient, orient[1:] + orient[:1]))
        locs = [r.location for r in cfg.equilibria]
        for sep in cfg.separatrices:
            assert np.all(np.hypot(sep.path[:, 0], sep.path[:, 1]) <= 1 + 1e-12)
            if isinstance(sep.limit, FiniteLimit):
                assert not cfg.equilibria[sep.limit.index].is_center
                end = sep.plane[-1]
                near = min(range(len(locs)), key=lambda i: abs(end - locs[i]))
                assert near == sep.limit.index
            else:
                other = cfg.saddles[sep.limit.index]
                assert other.sign != sep.saddle.sign
                X, Y = sep.path[-1]
                assert math.hypot(X, Y) > 0.99
        assert classify_portrait(cfg).value == oracle_class(s.roots)


def test_center_boundary_rule():
    for k, rts in GALLERY.items():
        cfg = separatrix_configuration(from_roots(rts))
        for i, r in enumerate(cfg.equilibria):
            if r.is_center:
                assert i not in cfg.limit_counts()
                assert center_region_type(cfg, i) in (CenterType.B1, CenterType.B2)


def test_perturbation_stability():
    rng = np.random.default_rng(31)
    for k, rts in GALLERY.items():
        base = classify_portrait(separatrix_configuration(from_roots(rts), sample_regions=False))
        # a real rescaling keeps every classification boundary
        scaled = [r * (1 + 1e-6) for r in rts]
        s = from_roots(scaled)
        assert classify_portrait(separatrix_configuration(s, sample_regions=False)) == base
        if any(r.is_center for r in classify_all(s)):
            continue
        # generic perturbations keep multiplicities; without centers nothing else can change
        moved = {z: z + 1e-6 * complex(*rng.normal(size=2)) for z in set(rts)}
        s2 = from_roots([moved[z] for z in rts])
        got = classify_portrait(separatrix_configuration(s2, sample_regions=False))
        assert got == base == oracle_class(s2.roots)


def test_level_set_consistency():
    s = from_roots(DIAGONAL)
    H = rational_integral(s)
    cfg = separatrix_configuration(s, sample_regions=False)
    for sep in cfg.separatrices:
        pts = np.column_stack([sep.plane.real, sep.plane.imag])
        assert np.max(np.abs(eval_along(H, pts) - 1)) <= 1e-5


def test_to_dict_decimation():
    cfg = separatrix_configuration(from_roots(DIAGONAL))
    d = cfg.to_dict(max_points=10)
    assert all(len(s["path"]) <= 10 for s in d["separatrices"])
    assert all(len(r["orbit"]) <= 10 for r in d["regions"])
    assert d["connections"] == [list(c) for c in cfg.connections]
    # endpoints survive decimation
    assert d["separatrices"][0]["path"][0] == list(map(float, cfg.separatrices[0].path[0]))
    assert d["separatrices"][0]["path"][-1] == list(map(float, cfg.separatrices[0].path[-1]))
