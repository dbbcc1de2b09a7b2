import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from solenoid.algebra import AlgebraElement, GammaElement
from solenoid.directed import (DirectedAlgebraSystem, PredictableTail, compat_action_check,
                               compat_inner_check, level_point, on_level, seminorm_estimate)
from solenoid.functions import RealFunction, ThetaLinear, gaussian
from solenoid.module import ModuleElement, rho_j
from solenoid.padic import PAdicRational, ball_canonicalize
from solenoid.suites import random_phase_poly

F = Fraction
THETA = 0.5477


def unit(p):
    return RealFunction.of(gaussian(p))


def test_generator_images_and_unit():
    for p in (2, 3):
        system = DirectedAlgebraSystem(p, 3)
        for j in range(3):
            assert all(ok for _, ok in system.check_generator_images(j))
            assert system.unital(j)


def test_connect_refuses_off_level_elements():
    system = DirectedAlgebraSystem(2, 3)
    b = AlgebraElement.delta(system.sigma, level_point(2, 2, 1, 0))
    with pytest.raises(ValueError):
        system.connect(b, 1)
    assert on_level(level_point(2, 2, 2, 4), 1)


def test_seminorm_examples():
    system = DirectedAlgebraSystem(2, 4)
    zeros = PredictableTail(system, [AlgebraElement(system.sigma)] * 4, 0)
    assert seminorm_estimate(zeros, 3, THETA) == 0
    one = PredictableTail.generated(system, AlgebraElement.unit(system.sigma), 0, 4)
    assert one.is_predictable() and seminorm_estimate(one, 4, THETA) == 1
    U = system.generators(1)[0]
    tail = PredictableTail.generated(system, U, 1, 4)
    assert tail.is_predictable()
    assert [seminorm_estimate(tail, d, THETA) for d in (1, 2, 3, 4)] == [1.0] * 4
    with pytest.raises(ValueError):
        seminorm_estimate(tail, 0, THETA)


def test_unpredictable_tail_detected():
    system = DirectedAlgebraSystem(2, 4)
    U, V = system.generators(0)
    tail = PredictableTail(system, [U, U, V], 0)
    assert not tail.is_predictable()


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_seminorm_constant_along_stabilized_orbit(seed, depth):
    system = DirectedAlgebraSystem(2, 6)
    rng = random.Random(seed)
    b = AlgebraElement(system.sigma, {GammaElement.of(F(rng.randint(-3, 3), 2), F(rng.randint(-3, 3), 2), 2):
                                      random_phase_poly(rng, 2) for _ in range(3)})
    tail = PredictableTail.generated(system, b, 1, 6)
    assert seminorm_estimate(tail, depth + 1, THETA) <= seminorm_estimate(tail, depth, THETA) + 1e-12


def test_compat_inner_examples():
    p = 2
    f = rho_j(p, 0, unit(p), 0)
    assert compat_inner_check(f, f, 0, THETA)[0]
    a = ModuleElement(p, [(ball_canonicalize(PAdicRational(0, p), 3), unit(p))])
    b = ModuleElement(p, [(ball_canonicalize(PAdicRational(F(1, 16), p), 5), unit(p))])
    ok, gap = compat_inner_check(a, b, 1, THETA)
    assert ok and gap == 0

    def corrupt(G):
        items = G.refined(1).terms()
        return ModuleElement(p, [(bb, g.scale(3) if i == 1 else g) for i, (bb, g) in enumerate(items)])

    assert not compat_inner_check(f, f, 0, THETA, refine=corrupt)[0]


def test_compat_action_examples():
    for p in (2, 3):
        system = DirectedAlgebraSystem(p, 3)
        f = RealFunction.of(gaussian(p, 2, ThetaLinear(F(1, 2), 1), ThetaLinear(F(1, 3))))
        for j in (0, 1):
            for m in range(p ** (2 * j)):
                F1 = rho_j(p, m, f, j)
                assert compat_action_check(F1, AlgebraElement.unit(system.sigma), j)
                for b in system.generators(j):
                    assert compat_action_check(F1, b, j)


def test_compat_level_two():
    p = 2
    f = unit(p)
    basis = [rho_j(p, m, f, 2) for m in range(0, 16, 5)]
    assert all(compat_inner_check(a, b, 2, THETA)[0] for a in basis for b in basis)
