import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from solenoid.algebra import (AlgebraElement, AlphaSequence, DPoint, GammaElement, Multiplier,
                              MultiplierMismatch, cocycle_check, commutator_exponent, convolve, eta,
                              generator_delta, generator_point, heisenberg_eta, involution,
                              morita_fraction, morita_fraction_check, power, psi_alpha, psi_alpha_raw,
                              rho)
from solenoid.phase import PhaseExponent, PhasePolynomial, ThetaRationalFunction, phase_eval
from solenoid.suites import random_element, random_gamma

F = Fraction


def G(a, b, p):
    return GammaElement.of(F(a), F(b), p)


def E(a, b=0, c=0):
    return PhaseExponent(F(a), F(b), F(c))


def test_psi_examples():
    th2 = AlphaSequence.theta(2)
    assert psi_alpha(th2, G("1/2", 0, 2), G(0, "1/2", 2)) == E("1/4", "1/4")
    assert psi_alpha(th2, G("3/4", 5, 2), G(7, 0, 2)) == E(0)
    th3 = AlphaSequence.theta(3)
    assert psi_alpha(th3, G("2/3", 0, 3), G(0, "1/9", 3)) == E("2/27", "2/27")


def test_eta_examples():
    assert eta(DPoint.of(F(1, 2), 0, 2), DPoint.of(0, F(1, 2), 2)) == E("1/4", "1/4")
    assert eta(DPoint.of(0, F(3, 4), 2), DPoint.of(F(5, 8), F(1, 8), 2)) == E(0)
    assert eta(DPoint.of(1, 0, 2, "D_perp"), DPoint.of(0, 1, 2, "D_perp")) == E(0, 0, -1)
    with pytest.raises(MultiplierMismatch):
        eta(DPoint.of(1, 0, 2), DPoint.of(0, 1, 2, "D_perp"))


def test_eta_matches_direct_evaluation():
    # exp(2 pi i (theta + 1) r1 s2) straight from floats
    theta = 0.5477
    rng = random.Random(3)
    for _ in range(50):
        x = DPoint.of(F(rng.randint(-9, 9), 4), F(rng.randint(-9, 9), 8), 2)
        y = DPoint.of(F(rng.randint(-9, 9), 8), F(rng.randint(-9, 9), 2), 2)
        w = float(x.r1.value * y.r2.value)
        assert abs(phase_eval(eta(x, y), theta) - cmath.exp(2j * math.pi * (theta + 1) * w)) < 1e-12
        xb, yb = DPoint(x.r1, x.r2, "D_perp"), DPoint(y.r1, y.r2, "D_perp")
        assert abs(phase_eval(eta(xb, yb), theta) - cmath.exp(-2j * math.pi * (1 / theta + 1) * w)) < 1e-12


def test_cocycle_examples():
    p = 2
    z = G(0, 0, p)
    for sigma in (Multiplier.eta_d(p), Multiplier.psi(AlphaSequence.theta(p)), Multiplier.eta_bar(p)):
        assert cocycle_check(sigma, G("1/2", 3, p), G("-5/4", "1/8", p), z)
    rng = random.Random(7)
    for sigma in (Multiplier.psi(AlphaSequence.theta(p)), Multiplier.eta_d(p)):
        assert all(cocycle_check(sigma, *(random_gamma(rng, p) for _ in range(3))) for _ in range(100))


def test_convolution_examples():
    p = 2
    sigma = Multiplier.eta_d(p)
    one = AlgebraElement.unit(sigma)
    f = random_element(random.Random(1), sigma)
    assert convolve(one, f) == f == convolve(f, one)
    g1, g2 = G("1/2", "3/4", p), G("-1/4", "1/2", p)
    prod = convolve(AlgebraElement.delta(sigma, g1), AlgebraElement.delta(sigma, g2))
    assert prod == AlgebraElement.delta(sigma, g1 + g2, PhasePolynomial.phase(p, sigma(g1, g2)))
    assert power(generator_delta(p, 1, "U"), p) == generator_delta(p, 0, "U")


def test_involution_examples():
    p = 3
    sigma = Multiplier.eta_d(p)
    one = AlgebraElement.unit(sigma)
    assert involution(one) == one
    g = G("1/3", "-2/9", p)
    want = AlgebraElement.delta(sigma, -g, PhasePolynomial.phase(p, -sigma(g, -g)))
    assert involution(AlgebraElement.delta(sigma, g)) == want
    f = random_element(random.Random(2), sigma)
    assert involution(involution(f)) == f


def test_generator_examples():
    for p in (2, 3):
        for j in range(3):
            n = p ** (2 * j)
            assert commutator_exponent(p, j) == E(F(1, n), F(1, n))
            v, u = generator_point(p, j, "V"), generator_point(p, j, "U")
            assert eta(DPoint(v.r1, v.r2), DPoint(u.r1, u.r2)) == E(0)
            assert power(generator_delta(p, j + 1, "V"), p) == generator_delta(p, j, "V")


def test_morita_examples():
    t = ThetaRationalFunction.theta()
    assert morita_fraction(2, 1) == (t + 1) / 4
    assert morita_fraction_check(2, 1)
    assert morita_fraction_check(3, 0)
    assert not morita_fraction_check(2, 1, perturb=F(1, 2))


def test_mixed_multipliers_refused():
    a = AlgebraElement.unit(Multiplier.eta_d(2))
    b = AlgebraElement.unit(Multiplier.psi(AlphaSequence.theta(2)))
    with pytest.raises(MultiplierMismatch):
        convolve(a, b)
    with pytest.raises(MultiplierMismatch):
        a + b


def test_explicit_alpha_sequence():
    a = AlphaSequence(2, F(1, 3), digits=[1, 0])
    assert a.validate(10)
    assert a.value(1) == E((F(1, 3) + 1) / 2)
    with pytest.raises(ValueError):
        AlphaSequence(2, F(1, 3), digits=[2])
    with pytest.raises(ValueError):
        AlphaSequence(2, F(1, 3), digits=[])


def test_json_ordering():
    sigma = Multiplier.eta_d(2)
    f = AlgebraElement.delta(sigma, G("1/2", 0, 2)) + AlgebraElement.delta(sigma, G(3, 1, 2))
    rows = f.to_json()
    assert [r["r1"] for r in rows] == ["3", "1/2"]


ints = st.integers(-12, 12)
depths = st.integers(0, 3)


@given(st.sampled_from([2, 3]), ints, depths, ints, depths, st.booleans())
def test_psi_representation_invariance(p, j1, k1, j4, k4, explicit):
    alpha = AlphaSequence(p, F(2, 5), digits=[1, 0, p - 1]) if explicit else AlphaSequence.theta(p)
    base = psi_alpha_raw(alpha, j1, k1, j4, k4)
    assert psi_alpha_raw(alpha, j1 * p, k1 + 1, j4, k4) == base
    assert psi_alpha_raw(alpha, j1, k1, j4 * p * p, k4 + 2) == base


@given(st.sampled_from([2, 3]), st.integers(0, 10 ** 6))
def test_theta_psi_equals_eta_on_d(p, seed):
    rng = random.Random(seed)
    x, y = random_gamma(rng, p), random_gamma(rng, p)
    assert psi_alpha(AlphaSequence.theta(p), x, y) == eta(DPoint(x.r1, x.r2), DPoint(y.r1, y.r2))


@given(st.sampled_from([2, 3]), st.integers(0, 10 ** 6))
def test_rho_trivial_between_d_and_annihilator(p, seed):
    rng = random.Random(seed)
    x, y = random_gamma(rng, p), random_gamma(rng, p)
    d = DPoint(x.r1, x.r2, "D")
    e = DPoint(y.r1, y.r2, "D_perp")
    assert rho(d, e) == E(0)
    assert rho(e, d) == E(0)


def test_rho_nontrivial_inside_d():
    d1, d2 = DPoint.of(F(1, 2), 0, 2), DPoint.of(0, F(1, 2), 2)
    assert rho(d1, d2) != E(0)
    assert heisenberg_eta(d1, d2) == eta(d1, d2)


@given(st.sampled_from(["eta", "psi", "etabar"]), st.integers(0, 10 ** 6))
def test_algebra_laws(kind, seed):
    p = 2
    sigma = {"eta": Multiplier.eta_d(p), "psi": Multiplier.psi(AlphaSequence.theta(p)),
             "etabar": Multiplier.eta_bar(p)}[kind]
    rng = random.Random(seed)
    f, g, h = (random_element(rng, sigma) for _ in range(3))
    assert convolve(convolve(f, g), h) == convolve(f, convolve(g, h))
    assert involution(convolve(f, g)) == convolve(involution(g), involution(f))
    assert involution(involution(f)) == f
    assert len(convolve(f, g).coeffs) <= len(f.coeffs) * len(g.coeffs)
    theta = 0.5477
    assert convolve(f, g).l1_norm(theta) <= f.l1_norm(theta) * g.l1_norm(theta) + 1e-10
