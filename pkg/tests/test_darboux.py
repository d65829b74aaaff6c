import dataclasses
import json
import math
from fractions import Fraction

import numpy as np
import pytest

from crportrait import serialize
from crportrait.darboux import (
    Absent,
    AngleFactor,
    DarbouxIntegral,
    ExpFactor,
    PowerFactor,
    RationalIntegral,
    build_integral,
    build_invariants,
    eval_along,
    eval_integral,
    integral_residual,
    nullspace_exponents,
    rational_integral,
    residue_sum,
    solve_exponents,
    structure,
)
from crportrait.errors import CommensurabilityUndecided, SingularPoint
from crportrait.system import eval_derivative, eval_field, from_roots

from helpers import DIAGONAL


def _polymul(a, b):
    out = [0j] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def test_invariants_quadratic():
    z2 = 1.5 - 0.5j
    invs = build_invariants(from_roots([0, z2]))
    assert [i.form for i in invs] == ["linear", "linear"]
    assert invs[0].cofactor == (-z2, 1)
    assert invs[1].cofactor == (0, 1)


def test_invariants_triple():
    invs = build_invariants(from_roots([0, 0, 0]))
    assert [(i.form, i.order) for i in invs] == [("linear", 0), ("exponential", 2)]
    assert invs[0].cofactor == (0, 0, 1)
    assert invs[1].cofactor == (-2, 0, 0)


def test_invariants_double():
    z2 = 1 + 2j
    invs = build_invariants(from_roots([0, 0, z2]))
    assert [(i.form, i.order) for i in invs] == [("linear", 0), ("linear", 0), ("exponential", 1)]
    assert invs[0].cofactor == (0, -z2, 1)
    assert invs[1].cofactor == (0, 0, 1)
    assert invs[2].cofactor == (z2, -1, 0)


def test_cofactor_identity_exact():
    rng = np.random.default_rng(10)
    for _ in range(50):
        # dyadic roots keep every product exact in binary floating point
        rts = [0] + [complex(*(rng.integers(-16, 16, 2) / 8)) for _ in range(2)]
        s = from_roots(rts)
        P = [complex(c) for c in reversed(s.coefficients)]
        for inv in build_invariants(s):
            if inv.form == "linear":
                assert _polymul([-inv.root, 1], list(inv.cofactor)) == P


@pytest.mark.parametrize("method", ["exact", "svd"])
def test_nullspace_identity(method):
    rng = np.random.default_rng(11)
    for _ in range(60):
        n = rng.choice([2, 3])
        rts = [0] + list(rng.normal(size=n - 1) + 1j * rng.normal(size=n - 1))
        if rng.random() < 0.3 and n == 3:
            rts = [0, 0, rts[1]]
        s = from_roots(rts)
        lam = nullspace_exponents(s, method)
        invs = build_invariants(s)
        # sum lam_k c_k(z) + conj(...) as a polynomial in z, zbar: each z^j coefficient vanishes
        width = max(len(i.cofactor) for i in invs)
        acc = np.zeros(width, dtype=complex)
        for l, inv in zip(lam, invs):
            c = np.zeros(width, dtype=complex)
            c[: len(inv.cofactor)] = inv.cofactor
            acc += l * c
        # z^0 terms combine with their conjugates; higher powers must vanish separately
        assert abs(acc[0].real) <= 1e-12
        assert np.all(np.abs(acc[1:]) <= 1e-12)


def test_exponent_examples():
    assert solve_exponents(from_roots([0, 2])) == [0.5j, -0.5j]
    lam = solve_exponents(from_roots(DIAGONAL))
    # C_SIMPLE form i / P'(z_k); P'(0) = 4i
    assert np.allclose(lam, [0.25, -0.5, 0.25])
    z2 = 1.5 + 1j
    zb = z2.conjugate()
    got = solve_exponents(from_roots([0, 0, z2]))
    want = [zb**2 * 1j, -(zb**2) * 1j, -zb * abs(z2) ** 2 * 1j]
    assert np.allclose(got, want)


def test_structure_names():
    assert structure(from_roots([0, 1j])) == "Q_SIMPLE"
    assert structure(from_roots([0, 0])) == "Q_DOUBLE"
    assert structure(from_roots([0, 1, 1j])) == "C_SIMPLE"
    assert structure(from_roots([0, 0, 1j])) == "C_DOUBLE"
    assert structure(from_roots([0, 0, 0])) == "C_TRIPLE"


def test_build_integral_centers():
    H = build_integral(from_roots([0, 2j]))
    assert isinstance(H, DarbouxIntegral)
    assert H.factors == (PowerFactor(0j, 2.0), PowerFactor(2j, -2.0))


def test_build_integral_nodes():
    H = build_integral(from_roots([0, 2]))
    assert H.factors == (AngleFactor(0j, -4.0), AngleFactor(2 + 0j, 4.0))


def test_build_integral_degenerate():
    H = build_integral(from_roots([0, 0]))
    assert isinstance(H, RationalIntegral)
    assert H.circles == ()
    assert H.numerator.tolist() == [[0.0, 1.0]]
    assert H.denominator.tolist() == [[0, 0, 1], [0, 0, 0], [1, 0, 0]]
    H3 = build_integral(from_roots([0, 0, 0]))
    assert H3.numerator.tolist() == [[0, 0], [0, 1]]
    # (x^2 + y^2)^2 = x^4 + 2 x^2 y^2 + y^4
    D = H3.denominator
    assert D[4, 0] == D[0, 4] == 1 and D[2, 2] == 2
    assert np.count_nonzero(D) == 3


def test_build_integral_focus():
    # z2 = 1 + 2i: both power and angle factors
    z2 = 1 + 2j
    H = build_integral(from_roots([0, z2]))
    kinds = [type(f).__name__ for f in H.factors]
    assert kinds == ["PowerFactor", "AngleFactor", "PowerFactor", "AngleFactor"]
    # exponents -i/P'(z_k) * |z2|^2: on z the exponent is i conj(z2) = 2 + i
    assert H.factors[0] == PowerFactor(0j, 2.0)
    assert H.factors[1] == AngleFactor(0j, -2.0)


def test_build_integral_double_root():
    H = build_integral(from_roots([0, 0, 1 + 1j]))
    exp = [f for f in H.factors if isinstance(f, ExpFactor)]
    assert len(exp) == 1
    # 2 Re(lam conj(z)) / |z|^2 with lam = -conj(z2)|z2|^2 i / 2 = -1 - i
    assert exp[0].numerator.tolist() == [[0, -2], [-2, 0]]
    powers = [f for f in H.factors if isinstance(f, PowerFactor)]
    assert powers == [PowerFactor(0j, 1.0), PowerFactor(1 + 1j, -1.0)]


def test_rational_examples():
    H = rational_integral(from_roots(DIAGONAL))
    assert H.circles == ((0j, 1), (1 + 1j, -2), (2 + 2j, 1))
    assert sum(H.exponents) == 0
    assert rational_integral(from_roots([0, 1 + 2j])) == Absent(
        "a focus is present; spiral orbits are not algebraic"
    )
    H3 = rational_integral(from_roots([0, 0, 0]))
    assert H3 == build_integral(from_roots([0, 0, 0]))


def test_rational_quadratic_forms():
    H = rational_integral(from_roots([0, 2]))
    # y / (x(x - 2) + y^2)
    assert H.numerator.tolist() == [[0, 1]]
    assert H.denominator[2, 0] == 1 and H.denominator[0, 2] == 1 and H.denominator[1, 0] == -2
    Hc = rational_integral(from_roots([0, 2j]))
    assert Hc.circles == ((0j, 1), (2j, -1))


def test_rational_double_root_is_conjecture():
    r = rational_integral(from_roots([0, 0, 1 + 1j]))
    assert isinstance(r, Absent) and r.conjecture


def test_rational_three_nodes():
    # roots 0, 1, 3: P' = 3, -2, 6 -> weights 1/3 : -1/2 : 1/6 -> (2, -3, 1)
    s = from_roots([0, 1, 3])
    H = rational_integral(s)
    assert isinstance(H, RationalIntegral) and H.circles == ()
    assert H.has_nontrivial_denominator
    for p in [(0.3, 0.7), (2.1, -1.4), (-1.5, 2.5)]:
        assert integral_residual(H, s, p, relative=True) <= 1e-12


def test_commensurability_undecided():
    with pytest.raises(CommensurabilityUndecided):
        rational_integral(from_roots([0, 1 + 1j, math.sqrt(2) * (1 + 1j)]))


def test_no_polynomial_integral():
    cases = [[0, 2], [0, 2j], [0, 0], [0, 0, 0], DIAGONAL, [0, 1, 3], [0, 1j, -1j]]
    for rts in cases:
        H = rational_integral(from_roots(rts))
        assert isinstance(H, RationalIntegral)
        assert H.has_nontrivial_denominator


def test_residual_examples():
    s = from_roots([0, 2j])
    H = rational_integral(s)
    assert integral_residual(H, s, (1, 1), relative=True) <= 1e-10
    sd = from_roots(DIAGONAL)
    Hd = rational_integral(sd)
    assert integral_residual(Hd, sd, (3, 0.5), relative=True) <= 1e-10
    bad = dataclasses.replace(Hd, circles=((0j, 1), (1 + 1j, -2), (2 + 2j, 1.01)))
    assert integral_residual(bad, sd, (3, 0.5), relative=True) > 1e-4
    # finite-difference oracle agrees that the perturbed form is not conserved
    h = 1e-6
    f = lambda x, y: eval_integral(bad, x, y)
    Hx = (f(3 + h, 0.5) - f(3 - h, 0.5)) / (2 * h)
    Hy = (f(3, 0.5 + h) - f(3, 0.5 - h)) / (2 * h)
    P, Q = eval_field(sd, 3, 0.5)
    assert abs(P * Hx + Q * Hy) == pytest.approx(integral_residual(bad, sd, (3, 0.5)), rel=1e-5)


def test_residual_darboux_random():
    rng = np.random.default_rng(13)
    for _ in range(100):
        n = rng.choice([2, 3])
        rts = [0] + list(rng.normal(size=n - 1) + 1j * rng.normal(size=n - 1))
        if n == 3 and rng.random() < 0.3:
            rts = [0, 0, rts[1]]
        s = from_roots(rts)
        H = build_integral(s)
        x, y = rng.uniform(-3, 3, 2)
        assert integral_residual(H, s, (x, y), relative=True) <= 1e-12


def test_singular_point():
    s = from_roots(DIAGONAL)
    H = rational_integral(s)
    with pytest.raises(SingularPoint):
        integral_residual(H, s, (1, 1))
    with pytest.raises(SingularPoint):
        eval_integral(build_integral(from_roots([0, 2])), 0.0, 0.0)


def test_eval_examples():
    assert eval_integral(rational_integral(from_roots([0, 2j])), 1, 1) == 1
    assert eval_integral(rational_integral(from_roots([0, 0])), 0, 1) == 1
    assert eval_integral(rational_integral(from_roots(DIAGONAL)), 0, 0.5) == pytest.approx(1, abs=1e-15)


def test_eval_branch_continuation():
    # exp(4(theta_2 - theta_1)) for z(z-2) continued once around the origin
    H = build_integral(from_roots([0, 2]))
    t = np.linspace(0, 2 * np.pi, 400)
    path = np.column_stack([0.5 * np.cos(t), 0.5 * np.sin(t)])
    v0 = eval_integral(H, 0.5, 0.0)
    v1 = eval_integral(H, path[-1, 0], path[-1, 1], branch_path=path)
    assert v1 / v0 == pytest.approx(math.exp(-8 * math.pi), rel=1e-9)
    assert eval_along(H, path, log=True)[-1] - math.log(v0) == pytest.approx(-8 * math.pi)


def test_residue_identity():
    rng = np.random.default_rng(14)
    for _ in range(500):
        rts = [0] + list(rng.normal(size=2) + 1j * rng.normal(size=2))
        s = from_roots(rts)
        inv = [abs(1 / eval_derivative(s, z)) for z in s.roots]
        assert abs(residue_sum(s)) <= 1e-9 * max(inv)


def test_serialization_deterministic():
    for rts in ([0, 1 + 2j], DIAGONAL, [0, 0, 1 + 1j], [0, 0, 0]):
        s = from_roots(rts)
        a = serialize.dumps(build_integral(s).to_dict())
        b = serialize.dumps(build_integral(s).to_dict())
        assert a == b
        json.loads(a)
    d = rational_integral(from_roots(DIAGONAL)).to_dict()
    assert [c["exponent"] for c in d["circles"]] == [1, -2, 1]


def test_exact_fraction_path_matches_svd():
    s = from_roots([0, Fraction(1, 2) + 0j, 1.25j])
    a = nullspace_exponents(s, "exact")
    b = nullspace_exponents(s, "svd")
    # same line up to sign
    k = np.argmax(np.abs(a))
    assert np.allclose(a, b * (a[k] / b[k]), atol=1e-10)
