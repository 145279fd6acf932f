"""
Small-class limits. As every x_a -> 0 the profile derivative P' tends to an
explicit polynomial determined by (d0, d∞) alone, whose interior root
structure falls into four cases. None of the limit objects is a Kähler
class; they are never passed to `decideExistence`.
"""
import logging
import math

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction

from pygqe.admissible import (
    AdmissibleData,
    baseQuantities,
    validate
)
from pygqe.config import SolverConfig
from pygqe.gqe.existence import decideExistence
from pygqe.gqe.mode import Mode
from pygqe.gqe.profile import buildP
from pygqe.gqe.verdict import Verdict
from pygqe.ratpoly import (
    Polynomial,
    RootInterval,
    deflateEndpointFactors,
    formatRational,
    isolateRoots,
    supNorm,
    toRational
)
from pygqe.types import (
    String,
    Int,
    Rational,
    Real,
    List,
    Tuple,
    Map,
    Optional,
    Any
)

logger = logging.getLogger(__name__)

class CaseTag(IntEnum):
    # d0 > 0, d∞ > 0
    BothEndpoints = 1
    # d0 = 0, d∞ > 0
    InfinityOnly = 2
    # d0 > 0, d∞ = 0
    ZeroOnly = 3
    # d0 = d∞ = 0
    NoEndpoints = 4

    @classmethod
    def classify(
        cls,
        d0: Int,
        dinf: Int
    ) -> "CaseTag":
        """
        >>> CaseTag.classify(2, 0)
        <CaseTag.ZeroOnly: 3>
        """
        if d0 < 0 or dinf < 0:
            raise ValueError(f"{__name__}.classify(): d0 and dinf must be non-negative.")
        if d0 > 0:
            return cls.BothEndpoints if dinf > 0 else cls.ZeroOnly
        return cls.InfinityOnly if dinf > 0 else cls.NoEndpoints

# distinct interior roots of the core polynomial in gqe mode
EXPECTED_INTERIOR_ROOTS: Map[CaseTag, Int] = {
    CaseTag.BothEndpoints: 2,
    CaseTag.InfinityOnly: 1,
    CaseTag.ZeroOnly: 1,
    CaseTag.NoEndpoints: 0
}

def limitEll(
    d0: Int,
    dinf: Int
) -> Rational:
    """
    >>> limitEll(2, 1)
    Fraction(-1, 5)
    """
    return Fraction(dinf - d0, 2 + d0 + dinf)

def limitScalBar(
    d0: Int,
    dinf: Int
) -> Rational:
    return Fraction((1 + d0 + dinf) * (2 + d0 + dinf))

def _limitPc(
    d0: Int,
    dinf: Int
) -> Polynomial:
    return Polynomial.linear(1, 1) ** d0 * Polynomial.linear(1, -1) ** dinf

def limitPprime(
    d0: Int,
    dinf: Int,
    b: Optional[Any] = None
) -> Polynomial:
    """
    lim P' as every base x_a -> 0.

    >>> limitPprime(1, 1)
    Polynomial(-4 + 12*t^2)
    """
    CaseTag.classify(d0, dinf)
    plus = Polynomial.linear(1, 1)
    minus = Polynomial.linear(1, -1)
    pc = _limitPc(d0, dinf)

    limit = -pc.scale(limitScalBar(d0, dinf))
    if d0 > 0:
        limit = limit + (plus ** (d0 - 1) * minus ** dinf).scale(2 * d0 * (d0 + 1))
    if dinf > 0:
        limit = limit + (plus ** d0 * minus ** (dinf - 1)).scale(2 * dinf * (dinf + 1))
    if b is not None and toRational(b) != 0:
        limit = limit - (pc * Polynomial.linear(limitEll(d0, dinf), 1)).scale(toRational(b))
    return limit

def limitP(
    d0: Int,
    dinf: Int,
    b: Optional[Any] = None
) -> Polynomial:
    """
    Primitive of `limitPprime` fixed by P(-1) = 2 lim p_c(-1), the same
    normalization as for actual classes.
    """
    primitive = limitPprime(d0, dinf, b).antiderivative()
    return primitive - primitive.evaluate(-1) + 2 * _limitPc(d0, dinf).evaluate(-1)

def caseConstant(
    d0: Int,
    dinf: Int
) -> Int:
    case = CaseTag.classify(d0, dinf)
    if case is CaseTag.InfinityOnly:
        return 1 + dinf
    if case is CaseTag.ZeroOnly:
        return 1 + d0
    return 1

def coreOf(
    Pprime: Polynomial,
    d0: Int,
    dinf: Int
) -> Polynomial:
    """Quotient of P' by its forced endpoint factors (1+t)^{d0-1} (1-t)^{d∞-1}."""
    return deflateEndpointFactors(Pprime, max(d0 - 1, 0), max(dinf - 1, 0))

@dataclass(frozen=True)
class RootStructure:
    case: CaseTag
    mode: Mode
    b: Rational
    limitPprime: Polynomial
    core: Polynomial
    roots: Tuple[RootInterval, ...]
    simple: bool
    # generalized mode only: g(-1), g(1) and g at t0 = -lim l
    t0: Optional[Rational] = None
    gMinus: Optional[Rational] = None
    gPlus: Optional[Rational] = None
    gT0: Optional[Rational] = None

    @property
    def rootCount(self) -> Int:
        return len(self.roots)

    @property
    def generalizedChecks(self) -> Optional[Map[String, bool]]:
        if self.mode is not Mode.Generalized:
            return None
        return {
            "g(-1) > 0": self.gMinus > 0,
            "g(1) > 0": self.gPlus > 0,
            "g(t0) < 0": self.gT0 < 0
        }

    def toDict(self) -> Map[String, Any]:
        payload = {
            "case": int(self.case),
            "mode": self.mode.value,
            "b": formatRational(self.b),
            "limit_pprime": [formatRational(c) for c in self.limitPprime.coefficients],
            "core": [formatRational(c) for c in self.core.coefficients],
            "core_text": str(self.core),
            "root_count": self.rootCount,
            "root_intervals": [
                [formatRational(interval.lo), formatRational(interval.hi)]
                for interval in self.roots
            ],
            "simple_roots": self.simple
        }
        if self.mode is Mode.Generalized:
            payload.update({
                "t0": formatRational(self.t0),
                "g_minus": formatRational(self.gMinus),
                "g_plus": formatRational(self.gPlus),
                "g_t0": formatRational(self.gT0),
                "checks": self.generalizedChecks
            })
        return payload

def _rootsAreSimple(core: Polynomial) -> bool:
    if core.degree <= 1:
        return True
    common = core.gcd(core.derivative())
    return common.degree == 0 or not isolateRoots(common, -1, 1)

def limitRootStructure(
    d0: Int,
    dinf: Int,
    b: Optional[Any] = None
) -> RootStructure:
    """
    >>> limitRootStructure(2, 1, 3).gT0
    Fraction(-24, 5)
    """
    case = CaseTag.classify(d0, dinf)
    mode = Mode.Gqe if b is None else Mode.Generalized
    b = Fraction(0) if b is None else toRational(b)

    Pprime = limitPprime(d0, dinf, b)
    core = coreOf(Pprime, d0, dinf).scale(Fraction(1, caseConstant(d0, dinf)))
    roots = tuple(isolateRoots(core, -1, 1)) if core.degree >= 1 else ()

    extra: Map[String, Any] = {}
    if mode is Mode.Generalized:
        t0 = -limitEll(d0, dinf)
        extra = {
            "t0": t0,
            "gMinus": core.evaluate(-1),
            "gPlus": core.evaluate(1),
            "gT0": core.evaluate(t0)
        }

    structure = RootStructure(
        case = case,
        mode = mode,
        b = b,
        limitPprime = Pprime,
        core = core,
        roots = roots,
        simple = _rootsAreSimple(core),
        **extra
    )
    logger.debug("case %d core %s: %d interior root(s)", case, core, structure.rootCount)
    return structure

@dataclass(frozen=True)
class ConvergenceRow:
    epsilon: Real
    # sup over [-1, 1] of |P'_eps - lim P'|
    distance: Real
    # interior roots of the deflated P'_eps and of P_eps
    derivativeRootCount: Int
    rootCount: Int
    limitRootCount: Int

    def toDict(self) -> Map[String, Any]:
        return {
            "epsilon": self.epsilon,
            "distance": self.distance,
            "pprime_root_count": self.derivativeRootCount,
            "p_root_count": self.rootCount,
            "limit_root_count": self.limitRootCount
        }

def scaledClass(
    template: AdmissibleData,
    direction: List[Any],
    epsilon: Any
) -> AdmissibleData:
    epsilon = toRational(epsilon)
    return template.withX([epsilon * toRational(u) for u in direction])

def convergenceDiagnostic(
    template: AdmissibleData,
    direction: List[Any],
    epsilons: List[Any],
    mode: Mode | String = Mode.Gqe,
    b: Optional[Any] = None
) -> Tuple[ConvergenceRow, ...]:
    """
    Distance of P' on the family x_a = eps * u_a to its limit. eps = 0 is
    rejected by `validate` like any other point outside the cone.
    """
    mode = Mode(mode)
    limitB = b if mode is Mode.Generalized else None
    structure = limitRootStructure(template.d0, template.dinf, limitB)

    rows: List[ConvergenceRow] = []
    for epsilon in epsilons:
        data = validate(scaledClass(template, direction, epsilon))
        profile = buildP(baseQuantities(data), data, mode, b)
        Pprime = profile.P.derivative()
        deflated = coreOf(Pprime, data.d0, data.dinf)
        rows.append(
            ConvergenceRow(
                epsilon = float(toRational(epsilon)),
                distance = supNorm(Pprime - structure.limitPprime),
                derivativeRootCount = len(isolateRoots(deflated, -1, 1)) if deflated.degree >= 1 else 0,
                rootCount = len(isolateRoots(profile.P, -1, 1)),
                limitRootCount = structure.rootCount
            )
        )
    return tuple(rows)

@dataclass(frozen=True)
class SmallnessThreshold:
    # largest tested eps with verdict exists, None if even the smallest fails
    largestExisting: Optional[Real]
    # smallest tested eps without existence, None if every tested eps exists
    smallestFailing: Optional[Real]
    evaluations: Int

def smallnessThreshold(
    template: AdmissibleData,
    direction: List[Any],
    mode: Mode | String = Mode.Gqe,
    b: Optional[Any] = None,
    config: Optional[SolverConfig] = None,
    epsilonMin: Real = 1e-4,
    epsilonMax: Real = 1.0,
    iterations: Int = 24
) -> SmallnessThreshold:
    """
    Geometric bisection for the largest eps in [epsilonMin, epsilonMax) at
    which the class x_a = eps * u_a still carries a metric. Assumes the
    verdict changes at most once along the ray.
    """
    config = config or SolverConfig()
    reach = max(abs(float(toRational(u))) for u in direction)
    if reach == 0:
        raise ValueError(f"{__name__}.smallnessThreshold(): direction must be nonzero.")
    top = min(epsilonMax, 1.0 / reach) * (1 - 1e-9)
    evaluations = 0

    def exists(epsilon: Real) -> bool:
        nonlocal evaluations
        evaluations += 1
        data = validate(scaledClass(template, direction, epsilon))
        return decideExistence(data, mode, b, config).verdict is Verdict.Exists

    if not exists(epsilonMin):
        return SmallnessThreshold(None, epsilonMin, evaluations)
    if exists(top):
        return SmallnessThreshold(top, None, evaluations)

    (lo, hi) = (epsilonMin, top)
    for _ in range(iterations):
        mid = math.sqrt(lo * hi)
        if exists(mid):
            lo = mid
        else:
            hi = mid
        if hi / lo < 1 + 1e-6:
            break
    logger.info("smallness threshold in [%g, %g]", lo, hi)
    return SmallnessThreshold(lo, hi, evaluations)
