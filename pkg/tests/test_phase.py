import cmath
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from solenoid.phase import (PhaseExponent, PhasePolynomial, ScalarQSqrtP, ThetaRationalFunction,
                            congruent_mod_one, phase_add, phase_eval, phase_is_trivial, phase_scale,
                            theta_fraction_reduce)

fracs = st.fractions(min_value=-3, max_value=3, max_denominator=12)
exps = st.builds(PhaseExponent, fracs, fracs, fracs)
thetas = st.floats(0.05, 0.95)


def E(a, b=0, c=0):
    return PhaseExponent(Fraction(a), Fraction(b), Fraction(c))


def test_phase_add_examples():
    assert phase_add(E("1/4", "1/4"), E("3/4")) == E(0, "1/4")
    assert phase_scale(0, E("1/3", 2, 5)) == E(0)
    assert phase_add(E(0, "1/2"), E(0, "1/2")) == E(0, 1)


def test_trivial_examples():
    assert phase_is_trivial(E(0))
    assert phase_is_trivial(E(1))
    assert not phase_is_trivial(E(0, "1/4", "-1/4"))


def test_phase_eval_examples():
    assert abs(phase_eval(E("1/2"), 0.3) + 1) < 1e-15
    assert abs(phase_eval(E(0, 1), 0.25) - 1j) < 1e-15
    assert abs(phase_eval(E(0, 0, 1), 2.0) + 1) < 1e-15
    with pytest.raises(ZeroDivisionError):
        phase_eval(E(0, 0, 1), 0.0)


def test_serialization_round_trip():
    e = E("-1/3", "5/7", "-2")
    assert e.serialize() == "2/3;5/7;-2/1"
    assert PhaseExponent.parse(e.serialize()) == e


def test_theta_fraction_examples():
    t = ThetaRationalFunction.theta()
    beta = -(t + 1) / (4 * t)
    assert beta / (4 * beta + 1) == (t + 1) / 4
    f = (t * t + 3) / (t - 2)
    assert f / f == ThetaRationalFunction.const(1)
    assert theta_fraction_reduce(ThetaRationalFunction((-1, 0, 1), (-1, 1))) == t + 1
    assert congruent_mod_one((t + 1) / 4 + 3, E("1/4", "1/4"))
    assert not congruent_mod_one((t + 1) / 4 + Fraction(1, 2), E("1/4", "1/4"))
    with pytest.raises(ZeroDivisionError):
        f / ThetaRationalFunction.const(0)


def test_cyclotomic_cancellation():
    for n in (2, 3, 6, 8, 12):
        s = PhasePolynomial.from_terms(2, [(1, E(Fraction(k, n))) for k in range(n)])
        assert s.is_zero()
    assert (PhasePolynomial.constant(3) + PhasePolynomial.phase(3, E("1/2"))).is_zero()


def test_scalar_sqrt_p_ring():
    s = ScalarQSqrtP(0, 1, 3)
    assert s * s == ScalarQSqrtP(3, 0, 3)


poly_terms = st.lists(st.tuples(st.integers(-3, 3), st.integers(-1, 1),
                                st.fractions(0, 1, max_denominator=12), st.integers(-2, 2),
                                st.integers(-1, 1)), min_size=0, max_size=4)


def make_poly(p, terms):
    return PhasePolynomial.from_terms(p, [(ScalarQSqrtP(u, v, p), E(a, Fraction(b, 2), Fraction(c, 3)))
                                          for u, v, a, b, c in terms])


def direct_sum(p, terms, theta):
    return sum(((u + v * math.sqrt(p)) * cmath.exp(2j * math.pi * (float(a) + b / 2 * theta + c / 3 / theta))
                for u, v, a, b, c in terms), 0j)


@given(exps, exps, exps)
def test_exponents_form_a_group(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x + (-x) == E(0)
    assert x - x == PhaseExponent()


@given(exps, exps, thetas)
def test_eval_is_a_homomorphism(x, y, theta):
    assert abs(phase_eval(x + y, theta) - phase_eval(x, theta) * phase_eval(y, theta)) < 1e-12


@given(st.integers(-5, 5), st.lists(thetas, min_size=10, max_size=10))
def test_trivial_evaluates_to_one(n, ts):
    x = E(n)
    assert phase_is_trivial(x)
    assert all(abs(phase_eval(x, t) - 1) < 1e-12 for t in ts)


@given(st.sampled_from([2, 3]), poly_terms, thetas)
def test_normalization_is_sound(p, terms, theta):
    assert abs(make_poly(p, terms).evaluate(theta) - direct_sum(p, terms, theta)) < 1e-9


@given(st.sampled_from([2, 3]), poly_terms)
def test_normalization_idempotent(p, terms):
    f = make_poly(p, terms)
    again = PhasePolynomial.from_terms(p, f.terms())
    assert again == f and again.key() == f.key()


@given(st.sampled_from([2, 3]), poly_terms, poly_terms, poly_terms)
def test_multiplication_laws(p, a, b, c):
    f, g, h = make_poly(p, a), make_poly(p, b), make_poly(p, c)
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h


@given(fracs, fracs, st.sampled_from([2, 3, 5]))
def test_sqrt_p_norm(u, v, p):
    x = ScalarQSqrtP(u, v, p)
    assert x * x.conjugate() == ScalarQSqrtP(u * u - p * v * v, 0, p)


small_polys = st.lists(st.integers(-4, 4), min_size=1, max_size=4)


@given(small_polys, small_polys, small_polys, small_polys)
def test_rational_functions_against_sympy(n1, d1, n2, d2):
    th = sympy.Symbol("theta")
    if not any(d1) or not any(d2) or not any(n2):
        return
    f = ThetaRationalFunction(n1, d1)
    g = ThetaRationalFunction(n2, d2)

    def sym(c):
        return sum(sympy.Rational(x) * th ** i for i, x in enumerate(c))

    F = sym(n1) / sym(d1)
    G = sym(n2) / sym(d2)
    for ours, theirs in ((f + g, F + G), (f * g, F * G), (f / g, F / G), (f - g, F - G)):
        num, den = sympy.fraction(sympy.cancel(sympy.together(theirs)))
        lead = sympy.Poly(den, th).LC()
        want_num = sympy.Poly(sympy.expand(num / lead), th).all_coeffs()[::-1]
        want_den = sympy.Poly(sympy.expand(den / lead), th).all_coeffs()[::-1]
        got_num = [sympy.Rational(x.numerator, x.denominator) for x in ours.num]
        got_den = [sympy.Rational(x.numerator, x.denominator) for x in ours.den]
        if not got_num:
            assert sympy.simplify(theirs) == 0
            continue
        assert got_num == want_num and got_den == want_den
