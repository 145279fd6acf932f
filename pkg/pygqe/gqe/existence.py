"""
Existence of an admissible GQE (or generalized-type) metric in one class:
build P, solve the k-condition, build F and certify it.
"""
import logging
import math

from dataclasses import dataclass

from pygqe.admissible import (
    ValidatedData,
    baseQuantities
)
from pygqe.config import SolverConfig
from pygqe.geometry import ScalarProfile
from pygqe.gqe.kcondition import (
    ExpWeightedIntegral,
    NoRootInWindowError,
    opennessDerivative,
    solveK
)
from pygqe.gqe.mode import Mode
from pygqe.gqe.momentum import (
    MomentumProfile,
    PositivityCertificate,
    ProfileCandidate,
    UnresolvedSignError,
    buildF,
    certifyPositivity
)
from pygqe.gqe.profile import (
    ProfilePolynomial,
    buildP
)
from pygqe.gqe.verdict import Verdict
from pygqe.ratpoly import (
    formatRational,
    isolateRoots
)
from pygqe.serialize import formatReal
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

FUTAKI_CONVENTION: String = "-(1/2) * integral of P over [-1, 1] / alpha0"

def futakiOnK(profile: ProfilePolynomial) -> Rational:
    """
    Futaki invariant paired with the Killing potential z, per unit fiberwise
    volume. Uses the identity

        ∫ (Scal - Scal_bar) z p_c dz = -∫ P dt,

    valid for any F with the admissible boundary values.

    >>> futakiOnK(profile)
    Fraction(0, 1)
    """
    if profile.mode is not Mode.Gqe:
        raise ValueError(f"{__name__}.futakiOnK(): the Futaki pairing is defined on the gqe profile only.")
    return -profile.P.definiteIntegral(-1, 1) / (2 * profile.source.alpha0)

def boundaryScale(
    momentum: MomentumProfile
) -> Real:
    # residuals are |e^{-|k|} I(k)| and |k| times it, both relative to ||P||_1
    return max(1.0, momentum.integral.norm)

def _boundaryPasses(
    momentum: MomentumProfile,
    config: SolverConfig
) -> Tuple[bool, Map[String, Real]]:
    residuals = momentum.boundaryResiduals()
    limit = config.boundaryTol * boundaryScale(momentum)
    return (max(residuals.values()) < limit, residuals)

@dataclass(frozen=True)
class CandidateOutcome:
    k: Real
    boundaryPasses: bool
    boundaryResiduals: Map[String, Real]
    certificate: Optional[PositivityCertificate]
    unresolvedAt: Optional[Real] = None

    @property
    def certified(self) -> bool:
        return (
            self.certificate is not None
            and self.certificate.positive
            and self.boundaryPasses
        )

@dataclass(frozen=True)
class ExistenceReport:
    verdict: Verdict
    mode: Mode
    b: Rational
    k: Optional[Real]
    # every k in the window that passed, smallest |k| first
    certifiedKs: Tuple[Real, ...]
    margin: Optional[Real]
    witness: Optional[Real]
    boundaryResiduals: Map[String, Real]
    rootCount: Int
    futakiK: Rational
    opennessDerivative: Optional[Real]
    kWindow: Real
    candidates: Tuple[CandidateOutcome, ...] = ()
    diagnostics: Tuple[String, ...] = ()

    @property
    def isCsc(self) -> bool:
        return (
            self.verdict is Verdict.Exists
            and self.mode is Mode.Gqe
            and self.k == 0.0
            and self.futakiK == 0
        )

    def toDict(self) -> Map[String, Any]:
        return {
            "verdict": self.verdict.value,
            "mode": self.mode.value,
            "b": formatRational(self.b),
            "k": formatReal(self.k),
            "certified_ks": [formatReal(k) for k in self.certifiedKs],
            "margin": formatReal(self.margin),
            "witness": formatReal(self.witness),
            "boundary_residuals": {
                name: formatReal(value)
                for (name, value) in self.boundaryResiduals.items()
            },
            "root_count": self.rootCount,
            "futaki_k": formatReal(float(self.futakiK)),
            "futaki_k_exact": formatRational(self.futakiK),
            "futaki_convention": FUTAKI_CONVENTION,
            "openness_derivative": formatReal(self.opennessDerivative),
            "is_csc": self.isCsc,
            "k_window": formatReal(self.kWindow),
            "diagnostics": list(self.diagnostics)
        }

def _examine(
    profile: ProfilePolynomial,
    k: Real,
    config: SolverConfig
) -> CandidateOutcome:
    momentum = buildF(ProfileCandidate(k, profile), config)
    (boundaryPasses, residuals) = _boundaryPasses(momentum, config)
    try:
        certificate = certifyPositivity(momentum, config)
    except UnresolvedSignError as error:
        logger.warning("k = %r: %s", k, error)
        return CandidateOutcome(k, boundaryPasses, residuals, None, error.z)
    return CandidateOutcome(k, boundaryPasses, residuals, certificate)

def decideExistence(
    data: ValidatedData,
    mode: Mode | String = Mode.Gqe,
    b: Optional[Any] = None,
    config: Optional[SolverConfig] = None
) -> ExistenceReport:
    """
    >>> report = decideExistence(validate(AdmissibleData.fromDict(payload)))
    >>> report.verdict
    <Verdict.FailsPositivity: 'fails_positivity'>
    """
    config = config or SolverConfig()
    mode = Mode(mode)
    q = baseQuantities(data)
    profile = buildP(q, data, mode, b)
    futaki = futakiOnK(profile if mode is Mode.Gqe else buildP(q, data))
    rootCount = len(isolateRoots(profile.P, -1, 1))

    common = {
        "mode": mode,
        "b": profile.b,
        "rootCount": rootCount,
        "futakiK": futaki,
        "kWindow": float(config.kMax)
    }

    try:
        solution = solveK(profile, config)
    except NoRootInWindowError as error:
        logger.info("verdict no_k_found (window %g)", error.window)
        return ExistenceReport(
            verdict = Verdict.NoKFound,
            k = None,
            certifiedKs = (),
            margin = None,
            witness = None,
            boundaryResiduals = {},
            opennessDerivative = None,
            diagnostics = (str(error), ),
            **common
        )

    ordered = sorted(solution.ks, key = lambda k: (abs(k), k))
    outcomes = tuple(_examine(profile, k, config) for k in ordered)
    certified = [outcome for outcome in outcomes if outcome.certified]
    diagnostics: List[String] = [f"{len(ordered)} root(s) of I(k) found by the {solution.method} search"]

    if certified:
        chosen = certified[0]
        verdict = Verdict.Exists
        openness = opennessDerivative(profile, chosen.k, config)
    else:
        openness = None
        failing = [
            outcome
            for outcome in outcomes
            if outcome.certificate is not None and not outcome.certificate.positive
        ]
        unresolved = [outcome for outcome in outcomes if outcome.certificate is None]
        if unresolved:
            chosen = unresolved[0]
            verdict = Verdict.Inconclusive
            diagnostics.append(f"sign of H unresolved near z = {chosen.unresolvedAt!r} for k = {chosen.k!r}")
        elif failing:
            chosen = failing[0]
            verdict = Verdict.FailsPositivity
        else:
            # positive margin but boundary residuals above tolerance
            chosen = outcomes[0]
            verdict = Verdict.Inconclusive
            diagnostics.append(f"boundary residuals above tolerance for k = {chosen.k!r}")

    certificate = chosen.certificate
    logger.info("verdict %s at k = %r", verdict.value, chosen.k)
    return ExistenceReport(
        verdict = verdict,
        k = chosen.k,
        certifiedKs = tuple(outcome.k for outcome in certified),
        margin = certificate.margin if certificate is not None else None,
        witness = certificate.witness if certificate is not None else None,
        boundaryResiduals = chosen.boundaryResiduals,
        opennessDerivative = openness,
        candidates = outcomes,
        diagnostics = tuple(diagnostics),
        **common
    )

@dataclass(frozen=True)
class CertificationReport:
    """
    Pass/fail per condition for an externally claimed k; nothing is searched.
    """
    k: Real
    mode: Mode
    b: Rational
    conditions: Map[String, bool]
    kResidual: Real
    boundaryResiduals: Map[String, Real]
    odeResidual: Real
    margin: Optional[Real]
    witness: Optional[Real]
    diagnostics: Tuple[String, ...] = ()

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())

    def toDict(self) -> Map[String, Any]:
        return {
            "k": formatReal(self.k),
            "mode": self.mode.value,
            "b": formatRational(self.b),
            "passed": self.passed,
            "conditions": dict(self.conditions),
            "k_residual": formatReal(self.kResidual),
            "boundary_residuals": {
                name: formatReal(value)
                for (name, value) in self.boundaryResiduals.items()
            },
            "ode_residual": formatReal(self.odeResidual),
            "margin": formatReal(self.margin),
            "witness": formatReal(self.witness),
            "diagnostics": list(self.diagnostics)
        }

def certifyCandidate(
    data: ValidatedData,
    k: Real,
    mode: Mode | String = Mode.Gqe,
    b: Optional[Any] = None,
    config: Optional[SolverConfig] = None
) -> CertificationReport:
    """
    >>> certifyCandidate(data, 0.0).conditions
    {'k_condition': True, 'boundary': True, 'ode_residual': True, 'positivity': True}
    """
    config = config or SolverConfig()
    mode = Mode(mode)
    k = float(k)
    if not math.isfinite(k):
        raise ValueError(f"{__name__}.certifyCandidate(): claimed k must be finite, got {k!r}.")

    q = baseQuantities(data)
    profile = buildP(q, data, mode, b)
    integral = ExpWeightedIntegral(profile.P, config.kSwitch, config.seriesTol)
    kResidual = abs(integral.scaledTotal(k))
    kPasses = kResidual <= config.tol * max(integral.norm, 1.0)

    momentum = buildF(ProfileCandidate(k, profile), config)
    (boundaryPasses, residuals) = _boundaryPasses(momentum, config)

    scalar = ScalarProfile(momentum)
    if mode is Mode.Gqe:
        odeResidual = scalar.gqeResidual()
    else:
        odeResidual = scalar.generalizedResidual(profile.b)
    odePasses = odeResidual < config.residualTol * (1.0 + abs(float(q.scalBar)))

    diagnostics: List[String] = []
    try:
        certificate = certifyPositivity(momentum, config)
        positivity = certificate.positive
        (margin, witness) = (certificate.margin, certificate.witness)
    except UnresolvedSignError as error:
        positivity = False
        (margin, witness) = (None, None)
        diagnostics.append(str(error))

    return CertificationReport(
        k = k,
        mode = mode,
        b = profile.b,
        conditions = {
            "k_condition": kPasses,
            "boundary": boundaryPasses,
            "ode_residual": odePasses,
            "positivity": positivity
        },
        kResidual = kResidual,
        boundaryResiduals = residuals,
        odeResidual = odeResidual,
        margin = margin,
        witness = witness,
        diagnostics = tuple(diagnostics)
    )
