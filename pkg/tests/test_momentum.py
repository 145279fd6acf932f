import numpy as np
import pytest

from pygqe.config import SolverConfig
from pygqe.gqe.kcondition import solveK
from pygqe.gqe.momentum import (
    ProfileCandidate,
    buildF,
    certifyPositivity
)

from conftest import profileOf

def goldenF(z):
    return (1 - z ** 2) * (61 + 5 * z ** 2) / 88

def test_golden_momentum_profile(half):
    momentum = buildF(ProfileCandidate(0.0, profileOf(half.data)))
    for z in np.linspace(-1.0, 1.0, 41):
        assert momentum.F(z) == pytest.approx(goldenF(z), abs = 1e-12)
    assert momentum.I() == 0.0

def test_golden_derivatives(half):
    momentum = buildF(ProfileCandidate(0.0, profileOf(half.data)))
    (f, df, d2f) = momentum.derivatives(0.5)
    # F = (61 - 56 z^2 - 5 z^4) / 88
    assert f == pytest.approx(goldenF(0.5), abs = 1e-14)
    assert df == pytest.approx((-112 * 0.5 - 20 * 0.5 ** 3) / 88, abs = 1e-14)
    assert d2f == pytest.approx((-112 - 60 * 0.5 ** 2) / 88, abs = 1e-14)
    assert momentum.dF(1.0) == pytest.approx(-1.5, abs = 1e-14)
    assert momentum.dF(-1.0) == pytest.approx(1.5, abs = 1e-14)

def test_boundary_conditions_hold_at_a_solved_k(half, offLine):
    for data in (half, offLine):
        profile = profileOf(data.data)
        (k, ) = solveK(profile).ks
        momentum = buildF(ProfileCandidate(k, profile))
        residuals = momentum.boundaryResiduals()
        assert set(residuals) == {"F(-1)", "F(1)", "F'(-1)", "F'(1)"}
        anchor = "F(1)" if k > 0 else "F(-1)"
        assert residuals[anchor] == 0.0
        scale = 1e-10 * max(1.0, momentum.integral.norm)
        assert max(residuals.values()) < scale

def test_theta_is_f_over_pc(half):
    momentum = buildF(ProfileCandidate(0.0, profileOf(half.data)))
    assert momentum.theta(0.0) == pytest.approx(61 / 88, rel = 1e-14)
    assert momentum.theta(0.5) == pytest.approx(goldenF(0.5) / (1 - 0.25 / 4), rel = 1e-12)

def test_margin_of_the_csc_class(half):
    certificate = certifyPositivity(buildF(ProfileCandidate(0.0, profileOf(half.data))))
    assert certificate.positive
    assert certificate.witness is None
    assert certificate.margin == pytest.approx(61 / 88, rel = 1e-12)
    assert [z for (z, _) in certificate.criticalSet] == [0.0]

def test_positivity_fails_at_four_fifths(failing):
    certificate = certifyPositivity(buildF(ProfileCandidate(0.0, profileOf(failing.data))))
    assert not certificate.positive
    assert certificate.witness == 0.0
    assert certificate.margin == pytest.approx(-0.1184 / 4.72, rel = 1e-10)

    # roots near -0.73, 0 and 0.73 plus the two midpoints
    points = [z for (z, _) in certificate.criticalSet]
    assert len(points) == 5
    assert points == sorted(points)
    assert points[0] == pytest.approx(-points[-1], abs = 1e-12)

def test_single_root_profile_is_positive(offLine):
    profile = profileOf(offLine.data)
    (k, ) = solveK(profile).ks
    momentum = buildF(ProfileCandidate(k, profile))
    certificate = certifyPositivity(momentum, SolverConfig())
    assert certificate.positive
    assert len(certificate.criticalSet) == 1

    (z, value) = certificate.criticalSet[0]
    assert value == pytest.approx(momentum.H(z))
    for w in np.linspace(-0.999, 0.999, 201):
        assert momentum.F(w) > 0
