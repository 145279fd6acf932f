from fractions import Fraction

import pytest
import sympy

from pygqe.admissible import (
    AdmissibleData,
    BaseFactor,
    ConeViolationError,
    baseQuantities,
    validate
)
from pygqe.asymptotics import (
    EXPECTED_INTERIOR_ROOTS,
    CaseTag,
    caseConstant,
    convergenceDiagnostic,
    limitEll,
    limitP,
    limitPprime,
    limitRootStructure,
    limitScalBar,
    scaledClass,
    smallnessThreshold
)
from pygqe.gqe.mode import Mode
from pygqe.gqe.profile import buildP
from pygqe.ratpoly import (
    Polynomial,
    isolateRoots
)

from conftest import smallTemplate

@pytest.mark.parametrize(("d0", "dinf", "case"), [
    (1, 1, CaseTag.BothEndpoints),
    (0, 2, CaseTag.InfinityOnly),
    (3, 0, CaseTag.ZeroOnly),
    (0, 0, CaseTag.NoEndpoints)
])
def test_classify(d0, dinf, case):
    assert CaseTag.classify(d0, dinf) is case
    with pytest.raises(ValueError):
        CaseTag.classify(-1, 0)

@pytest.mark.parametrize(("d0", "dinf", "core"), [
    (1, 1, Polynomial([-4, 0, 12])),
    (0, 2, Polynomial([0, 4])),
    (2, 0, Polynomial([0, -4])),
    (0, 0, Polynomial.constant(-2))
])
def test_limit_cores(d0, dinf, core):
    structure = limitRootStructure(d0, dinf)
    assert structure.core == core
    assert structure.mode is Mode.Gqe
    assert structure.rootCount == EXPECTED_INTERIOR_ROOTS[structure.case]
    assert structure.simple
    assert structure.generalizedChecks is None

def test_case_constants():
    assert caseConstant(1, 1) == 1
    assert caseConstant(0, 2) == 3
    assert caseConstant(2, 0) == 3
    assert caseConstant(0, 0) == 1

def test_every_case_has_the_expected_root_count():
    for d0 in range(4):
        for dinf in range(4):
            structure = limitRootStructure(d0, dinf)
            assert structure.rootCount == EXPECTED_INTERIOR_ROOTS[structure.case], (d0, dinf)
            assert structure.simple

def test_generalized_cubic():
    structure = limitRootStructure(2, 1, 3)
    assert structure.mode is Mode.Generalized
    assert structure.t0 == Fraction(1, 5)
    assert structure.gT0 == Fraction(-24, 5)
    assert structure.gMinus == 24
    assert structure.gPlus == 8
    assert structure.rootCount == 2
    assert all(structure.generalizedChecks.values())

    payload = structure.toDict()
    assert payload["g_t0"] == "-4.8"
    assert payload["checks"] == {"g(-1) > 0": True, "g(1) > 0": True, "g(t0) < 0": True}

@pytest.mark.parametrize("b", [-5, -1, 0, 1, 5])
def test_generalized_case_one_limit_has_one_root(b):
    P = limitP(1, 1, b)
    assert P == Polynomial([1, 0, -1]) * Polynomial([Fraction(b, 4), -4, Fraction(-b, 4)])
    assert len(isolateRoots(P)) == 1

def test_limit_p_normalization():
    assert limitP(0, 0) == Polynomial([0, -2])
    assert limitP(1, 1) == Polynomial([0, -4, 0, 4])
    assert limitP(1, 1).evaluate(-1) == 0

@pytest.mark.parametrize("d0", range(4))
@pytest.mark.parametrize("dinf", range(4))
def test_limit_matches_symbolic_limit(d0, dinf):
    if d0 == dinf == 0:
        factors = ((1, 2), )
    else:
        factors = ((1, 2), (2, -1))
    eps, t = sympy.symbols("epsilon t")

    # the same family built symbolically, then evaluated at epsilon = 0
    linear = [(d, s, eps * (index + 1)) for (index, (d, s)) in enumerate(factors)]
    if d0 > 0:
        linear.append((d0, d0 + 1, 1))
    if dinf > 0:
        linear.append((dinf, -(dinf + 1), -1))
    pc = sympy.prod([(1 + x * t) ** d for (d, _, x) in linear])
    sigma = sum(d * s * x * pc / (1 + x * t) for (d, s, x) in linear)
    alpha0 = sympy.integrate(pc, (t, -1, 1))
    beta0 = pc.subs(t, 1) + pc.subs(t, -1) + sympy.integrate(sigma, (t, -1, 1))
    Pprime = 2 * sigma - 2 * beta0 / alpha0 * pc
    limit = sympy.Poly(sympy.cancel(Pprime.subs(eps, 0)), t)

    expected = [Fraction(int(c.p), int(c.q)) for c in reversed(limit.all_coeffs())]
    assert list(limitPprime(d0, dinf).coefficients) == expected

    ell = sympy.nsimplify((-sympy.integrate(pc * t, (t, -1, 1)) / alpha0).subs(eps, 0))
    assert Fraction(int(ell.p), int(ell.q)) == limitEll(d0, dinf)

def test_limit_scal_bar():
    assert limitScalBar(0, 0) == 2
    assert limitScalBar(1, 1) == 12
    assert limitScalBar(0, 2) == 12

def test_ell_approaches_its_limit():
    template = AdmissibleData(2, 1, (BaseFactor(1, Fraction(2), Fraction(1, 2)), ))
    gaps = []
    for epsilon in ("0.1", "0.01", "0.001"):
        q = baseQuantities(validate(scaledClass(template, [1], epsilon)))
        assert q.ell == -q.alpha1 / q.alpha0
        gaps.append(abs(q.ell - limitEll(2, 1)))
    assert gaps[0] > gaps[1] > gaps[2]

def test_convergence_diagnostic():
    template = AdmissibleData(1, 1, (
        BaseFactor(1, Fraction(2), Fraction(1, 2)),
        BaseFactor(1, Fraction(-2), Fraction(1, 2))
    ))
    rows = convergenceDiagnostic(template, [1, -1], ["0.1", "0.01", "0.001"])
    distances = [row.distance for row in rows]
    assert distances[0] > distances[1] > distances[2]
    assert all(row.rootCount == 1 for row in rows)
    assert all(row.derivativeRootCount == 2 == row.limitRootCount for row in rows)
    assert rows[0].toDict()["p_root_count"] == 1

def test_convergence_diagnostic_rejects_the_limit_point():
    with pytest.raises(ConeViolationError):
        convergenceDiagnostic(smallTemplate(1, 1), [1], [0])

def test_limit_of_actual_profiles_in_generalized_mode():
    template = smallTemplate(1, 1)
    rows = convergenceDiagnostic(template, [1], ["0.01", "0.001"], Mode.Generalized, 2)
    assert rows[0].distance > rows[1].distance
    assert rows[1].rootCount == 1

def test_smallness_threshold_on_the_line():
    template = AdmissibleData(0, 0, (
        BaseFactor(1, Fraction(-2), Fraction(1, 2)),
        BaseFactor(1, Fraction(2), Fraction(-1, 2))
    ))
    threshold = smallnessThreshold(template, [1, -1], iterations = 12)
    assert threshold.largestExisting is not None
    assert 0.75 <= threshold.largestExisting < threshold.smallestFailing <= 0.8
    assert threshold.evaluations <= 14

def test_smallness_threshold_requires_a_direction():
    with pytest.raises(ValueError):
        smallnessThreshold(smallTemplate(1, 1), [0])

def test_profiles_are_built_from_the_scaled_class():
    data = validate(scaledClass(smallTemplate(0, 0), ["-1/2"], "0.1"))
    assert data.factors[0].x == Fraction(-1, 20)
    assert buildP(baseQuantities(data), data).P.evaluate(-1) == 2 * (1 - Fraction(-1, 20))
