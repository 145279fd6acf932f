"""
Momentum profiles F(z) = e^{kz} H(z), H(z) = ∫_{-1}^{z} e^{-kt} P(t) dt, and
their positivity certificates.

At a root of I(k) the same F equals -e^{kz} ∫_{z}^{1} e^{-kt} P(t) dt; for
k > 0 that form is evaluated, so F(1) = 0 exactly and |F(-1)| is the
k-condition residual.
"""
import logging
import math

from dataclasses import dataclass
from fractions import Fraction

from pygqe.config import SolverConfig
from pygqe.gqe.kcondition import ExpWeightedIntegral
from pygqe.gqe.profile import ProfilePolynomial
from pygqe.ratpoly import (
    isolateRoots,
    refineRoot
)
from pygqe.types import (
    String,
    Real,
    List,
    Tuple,
    Map,
    Optional
)

logger = logging.getLogger(__name__)

_MAX_REFINEMENTS = 12

class UnresolvedSignError(Exception):
    def __init__(
        self,
        message: String,
        z: Real
    ):
        super().__init__(message)
        self.z: Real = z

@dataclass(frozen=True)
class ProfileCandidate:
    k: Real
    profile: ProfilePolynomial

class MomentumProfile:
    """
    F and its first two derivatives from the exact identities

        F' = k F + P,   F'' = k F' + P'.

    >>> momentum = buildF(ProfileCandidate(0.0, profile))
    >>> momentum.F(0.0)
    0.6931818181818182
    """
    def __init__(
        self,
        candidate: ProfileCandidate,
        config: Optional[SolverConfig] = None
    ):
        self._config: SolverConfig = config or SolverConfig()
        self.candidate: ProfileCandidate = candidate
        self.k: Real = float(candidate.k)
        self.P = candidate.profile.P
        self.dP = self.P.derivative()
        self.pc = candidate.profile.source.pc
        self._integral = ExpWeightedIntegral(self.P, self._config.kSwitch, self._config.seriesTol)

    @property
    def integral(self) -> ExpWeightedIntegral:
        return self._integral

    def I(self) -> Real:
        return self._integral.total(self.k)

    def H(self, z: Real) -> Real:
        z = float(z)
        return math.exp(-self.k * z) * self.F(z)

    def F(self, z: Real) -> Real:
        return self._integral.anchoredPartial(self.k, float(z))

    def dF(self, z: Real) -> Real:
        return self.k * self.F(z) + self.P.evalFloat(float(z))

    def d2F(self, z: Real) -> Real:
        return self.k * self.dF(z) + self.dP.evalFloat(float(z))

    def derivatives(self, z: Real) -> Tuple[Real, Real, Real]:
        """(F, F', F'') at z, with F'' built on the same rounded F'."""
        z = float(z)
        f = self.F(z)
        df = self.k * f + self.P.evalFloat(z)
        d2f = self.k * df + self.dP.evalFloat(z)
        return (f, df, d2f)

    def theta(self, z: Real) -> Real:
        """Θ = F / p_c on the open interval."""
        return self.F(z) / self.pc.evalFloat(float(z))

    def boundaryResiduals(self) -> Map[String, Real]:
        """|F(±1)| and |F'(±1) ± 2 p_c(±1)|."""
        (fMinus, dfMinus, _) = self.derivatives(-1.0)
        (fPlus, dfPlus, _) = self.derivatives(1.0)
        return {
            "F(-1)": abs(fMinus),
            "F(1)": abs(fPlus),
            "F'(-1)": abs(dfMinus - 2 * float(self.pc.evaluate(-1))),
            "F'(1)": abs(dfPlus + 2 * float(self.pc.evaluate(1)))
        }

def buildF(
    candidate: ProfileCandidate,
    config: Optional[SolverConfig] = None
) -> MomentumProfile:
    return MomentumProfile(candidate, config)

@dataclass(frozen=True)
class PositivityCertificate:
    # min of H over interior roots of P and midpoints between consecutive roots
    margin: Real
    witness: Optional[Real]
    # (z, H(z)) for every point of the critical set
    criticalSet: Tuple[Tuple[Real, Real], ...]

    @property
    def positive(self) -> bool:
        return self.margin > 0

def _valueAtRoot(
    momentum: MomentumProfile,
    interval,
    tolZero: Real,
    width: Fraction
) -> Tuple[Real, Real]:
    # signs are read off F, which stays O(|P|); H carries the factor e^{-kz}
    P = momentum.P
    for _ in range(_MAX_REFINEMENTS):
        if interval.exact:
            z = float(interval.lo)
            if abs(momentum.F(z)) > tolZero:
                return (z, momentum.H(z))
            break

        z = float(interval.midpoint)
        values = [momentum.F(float(interval.lo)), momentum.F(z), momentum.F(float(interval.hi))]
        if (
            all(abs(v) > tolZero for v in values)
            and len({v > 0 for v in values}) == 1
        ):
            return (z, momentum.H(z))

        width = width / 1024
        interval = refineRoot(P, interval, width)

    z = float(interval.midpoint)
    raise UnresolvedSignError(
        f"{__name__}.certifyPositivity(): H({z!r}) cannot be separated from 0 at tolerance {tolZero:.1e}.",
        z
    )

def certifyPositivity(
    momentum: MomentumProfile,
    config: Optional[SolverConfig] = None
) -> PositivityCertificate:
    """
    sign(F) = sign(H) and H' = e^{-kz} P, so H is monotone between
    consecutive roots of P; its interior minimum sits at a root of P.

    >>> certifyPositivity(buildF(ProfileCandidate(0.0, profile))).margin
    0.6931818181818182
    """
    config = config or SolverConfig()
    P = momentum.P
    tolZero = config.zeroTol * (1.0 + momentum.integral.norm)
    width = Fraction(config.rootWidth)

    roots = isolateRoots(P, -1, 1, width = width)
    criticalSet: List[Tuple[Real, Real]] = [
        _valueAtRoot(momentum, interval, tolZero, width)
        for interval in roots
    ]

    for ((left, _), (right, _)) in zip(list(criticalSet), criticalSet[1:]):
        mid = 0.5 * (left + right)
        criticalSet.append((mid, momentum.H(mid)))
    criticalSet.sort()

    if not criticalSet:
        # P keeps one sign on (-1, 1); cannot happen with P(-1+) > 0 > P(1-)
        z = 0.0
        criticalSet.append((z, momentum.H(z)))

    (witness, margin) = min(criticalSet, key = lambda point: point[1])
    if margin > 0:
        witness = None
    else:
        logger.info("positivity fails: H(%r) = %.6g", witness, margin)

    return PositivityCertificate(margin, witness, tuple(criticalSet))
