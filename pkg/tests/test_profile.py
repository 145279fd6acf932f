import random

from fractions import Fraction

import pytest
import sympy

from pygqe.admissible import (
    AdmissibleData,
    BaseFactor,
    baseQuantities,
    validate
)
from pygqe.gqe.mode import Mode
from pygqe.gqe.profile import (
    buildP,
    endpointSignProfile,
    equationRhs
)
from pygqe.ratpoly import Polynomial

from conftest import profileOf

def randomData(rng: random.Random) -> AdmissibleData:
    factors = []
    for _ in range(rng.randint(0, 3)):
        x = Fraction(rng.randint(1, 19), 20) * rng.choice([-1, 1])
        s = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        factors.append(BaseFactor(rng.randint(1, 2), s, x))
    d0 = rng.randint(0, 3)
    dinf = rng.randint(0, 3)
    if not factors and d0 == dinf == 0:
        d0 = 1
    return AdmissibleData(d0, dinf, tuple(factors))

def test_golden_profile_polynomial(half):
    profile = buildP(baseQuantities(half), half)
    assert profile.P == Polynomial([0, Fraction(-14, 11), 0, Fraction(-5, 22)])
    assert profile.P.evaluate(-1) == Fraction(3, 2)
    assert profile.mode is Mode.Gqe

def test_golden_profile_matches_symbolic_substitution(half):
    # P(t) = 2t(3 - 3x^2 - 4x^3 - x^2(1 - 4x - x^2)t^2) / (x^2 - 3) on the line x2 = -x1
    x, t = sympy.symbols("x t")
    closed = 2 * t * (3 - 3 * x ** 2 - 4 * x ** 3 - x ** 2 * (1 - 4 * x - x ** 2) * t ** 2) / (x ** 2 - 3)
    for x1 in (Fraction(1, 2), Fraction(3, 10), Fraction(4, 5)):
        P = profileOf(AdmissibleData(0, 0, (
            BaseFactor(1, Fraction(-2), x1),
            BaseFactor(1, Fraction(2), -x1)
        ))).P
        expected = sympy.Poly(sympy.expand(closed.subs(x, sympy.Rational(x1.numerator, x1.denominator))), t)
        assert [Fraction(int(c.p), int(c.q)) for c in reversed(expected.all_coeffs())] == list(P.coefficients)

def test_derivative_is_the_equation_right_hand_side(half):
    q = baseQuantities(half)
    profile = buildP(q, half)
    assert profile.rhs == equationRhs(q)
    assert profile.rhs == q.sigma.scale(2) - q.pc.scale(2 * q.beta0 / q.alpha0)

def test_boundary_identities_and_endpoint_profile_on_random_data():
    rng = random.Random(20240611)
    for _ in range(50):
        data = validate(randomData(rng))
        q = baseQuantities(data)
        profile = buildP(q, data)

        assert profile.P.evaluate(-1) == 2 * q.pc.evaluate(-1)
        assert profile.P.evaluate(1) == -2 * q.pc.evaluate(1)

        endpoints = endpointSignProfile(profile, data)
        assert (endpoints.orderMinus, endpoints.orderPlus) == (data.d0, data.dinf)
        assert (endpoints.signMinus, endpoints.signPlus) == (1, -1)
        assert endpoints.derivativeSignMinus == 1
        assert endpoints.derivativeSignPlus == (-1) ** (data.dinf + 1)

def test_endpoint_profile_with_vanishing_orders():
    data = validate(AdmissibleData(0, 2, (BaseFactor(1, Fraction(2), Fraction(1, 4)), )))
    profile = buildP(baseQuantities(data), data)
    endpoints = endpointSignProfile(profile, data)
    assert endpoints.orderPlus == 2
    assert endpoints.derivativeSignPlus == -1
    assert profile.P.evaluate(1) == 0
    assert profile.P.derivative().evaluate(1) == 0

def test_endpoint_profile_of_the_half_class(half):
    endpoints = endpointSignProfile(profileOf(half.data), half)
    assert (endpoints.orderMinus, endpoints.orderPlus) == (0, 0)
    assert (endpoints.signMinus, endpoints.signPlus) == (1, -1)

def test_generalized_profile_adds_the_affine_term():
    data = validate(AdmissibleData(1, 1, (BaseFactor(1, Fraction(2), Fraction(1, 20)), )))
    q = baseQuantities(data)
    gqe = buildP(q, data)
    generalized = buildP(q, data, Mode.Generalized, "3/2")

    assert generalized.b == Fraction(3, 2)
    difference = generalized.P.derivative() - gqe.P.derivative()
    assert difference == -(q.pc * Polynomial([q.ell, 1])).scale(Fraction(3, 2))
    assert generalized.P.evaluate(1) == -2 * q.pc.evaluate(1)

def test_generalized_with_zero_b_is_the_gqe_profile(half):
    q = baseQuantities(half)
    assert buildP(q, half, "generalized", 0).P == buildP(q, half).P

def test_b_requires_generalized_mode(half):
    with pytest.raises(ValueError):
        buildP(baseQuantities(half), half, Mode.Gqe, 2)
