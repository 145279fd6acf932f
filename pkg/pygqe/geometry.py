"""
Scalar-profile geometry of an admissible metric on the interior of the
moment interval: scalar curvature, the Laplacian on functions of z and the
residuals of the GQE and generalized-type equations.
"""
import logging
import math

import numpy as np

from pygqe.admissible import BaseQuantities
from pygqe.gqe.momentum import MomentumProfile
from pygqe.gqe.profile import equationRhs
from pygqe.ratpoly import (
    Polynomial,
    toRational
)
from pygqe.types import (
    String,
    Int,
    Real,
    Callable,
    Optional,
    Any
)

logger = logging.getLogger(__name__)

class EndpointSingularityError(Exception):
    def __init__(self, message: String):
        super().__init__(message)

def chebyshevSamples(
    n: Int = 200,
    clip: Real = 1e-6
) -> np.ndarray:
    """
    Chebyshev points of the first kind, ascending, clipped to
    [-1 + clip, 1 - clip].

    >>> chebyshevSamples(3)
    array([-0.8660254,  0.       ,  0.8660254])
    """
    if n < 1:
        raise ValueError(f"{__name__}.chebyshevSamples(): n must be positive.")
    nodes = np.cos((2 * np.arange(n) + 1) * np.pi / (2 * n))[::-1]
    return np.clip(nodes, -1.0 + clip, 1.0 - clip)

class ScalarProfile:
    """
    Scal(z) = 2 sigma(z) / p_c(z) - F''(z) / p_c(z) and Δ on functions of z,
    for one momentum profile.

    >>> scalar = ScalarProfile(buildF(ProfileCandidate(0.0, profile)))
    >>> scalar.scal(0.0)
    -2.727272727272727
    """
    def __init__(
        self,
        momentum: MomentumProfile,
        samples: Int = 200,
        clip: Real = 1e-6
    ):
        self.momentum: MomentumProfile = momentum
        self.q: BaseQuantities = momentum.candidate.profile.source
        self._samples: Int = samples
        self._clip: Real = clip

    def _pc(
        self,
        z: Real,
        funcName: String
    ) -> Real:
        z = float(z)
        if not (-1.0 < z < 1.0):
            raise EndpointSingularityError(f"{__name__}.{funcName}(): z = {z!r} is not in the open interval (-1, 1).")
        value = self.q.pc.evalFloat(z)
        if value <= 0:
            raise EndpointSingularityError(f"{__name__}.{funcName}(): p_c({z!r}) = {value!r} is not positive.")
        return value

    def scal(self, z: Real) -> Real:
        pc = self._pc(z, "scal")
        (_, _, d2f) = self.momentum.derivatives(z)
        return (2 * self.q.sigma.evalFloat(float(z)) - d2f) / pc

    def deltaZ(self, z: Real) -> Real:
        """Δz = -F'(z) / p_c(z)."""
        pc = self._pc(z, "deltaZ")
        return -self.momentum.dF(z) / pc

    def laplacian(self, S: Polynomial) -> Callable[[Real], Real]:
        """
        >>> scalar.laplacian(Polynomial.monomial(1))(0.5) == scalar.deltaZ(0.5)
        True
        """
        dS = S.derivative()
        d2S = dS.derivative()

        def apply(z: Real) -> Real:
            pc = self._pc(z, "laplacian")
            (f, df, _) = self.momentum.derivatives(z)
            z = float(z)
            return -(df * dS.evalFloat(z) + f * d2S.evalFloat(z)) / pc

        return apply

    def _samplePoints(self, samples: Optional[Any]) -> np.ndarray:
        if samples is None:
            return chebyshevSamples(self._samples, self._clip)
        return np.asarray(samples, dtype = float)

    def _residual(
        self,
        rhs: Polynomial,
        samples: Optional[Any],
        k: Optional[Real]
    ) -> Real:
        # [E(z) - (F'' - k F')] / p_c with E evaluated exactly at the sample
        k = self.momentum.k if k is None else float(k)
        worst = 0.0
        for z in self._samplePoints(samples):
            z = float(z)
            pc = self._pc(z, "residual")
            (_, df, d2f) = self.momentum.derivatives(z)
            value = abs((rhs.evalFloat(z) - (d2f - k * df)) / pc)
            if not math.isfinite(value):
                return math.inf
            worst = max(worst, value)
        return worst

    def gqeResidual(
        self,
        samples: Optional[Any] = None,
        k: Optional[Real] = None
    ) -> Real:
        """
        max |Scal - Scal_bar - k Δz| over the samples; k defaults to the
        profile's own k.
        """
        return self._residual(equationRhs(self.q), samples, k)

    def generalizedResidual(
        self,
        b: Any,
        samples: Optional[Any] = None,
        k: Optional[Real] = None
    ) -> Real:
        """max |Scal - Scal_bar - k Δz - b (z + l)| over the samples."""
        b = toRational(b)
        shift = self.q.pc * Polynomial.linear(self.q.ell, 1)
        if shift.definiteIntegral(-1, 1) != 0:
            raise ArithmeticError(f"{__name__}.generalizedResidual(): ∫ (z + l) p_c dz is not zero.")
        return self._residual(equationRhs(self.q, b), samples, k)

