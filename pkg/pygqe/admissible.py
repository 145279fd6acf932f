"""
Admissible data: one Kähler class on one admissible manifold, and the base
quantities every later stage is built from.

All integrals use the fiberwise measure p_c(z) dz on [-1, 1]; the constant
volume factor of the base is dropped.
"""
import logging

from dataclasses import (
    dataclass,
    replace
)
from fractions import Fraction

from pygqe.ratpoly import (
    Polynomial,
    RationalParseError,
    toRational,
    formatRational,
    isolateRoots
)
from pygqe.types import (
    String,
    Int,
    Rational,
    List,
    Tuple,
    Map,
    Any,
    Unit
)

logger = logging.getLogger(__name__)

class ConeViolationError(Exception):
    def __init__(self, message: String):
        super().__init__(message)

class EmptyExtendedIndexError(Exception):
    def __init__(self, message: String):
        super().__init__(message)

class InvalidDataError(Exception):
    def __init__(
        self,
        message: String,
        field: String
    ):
        super().__init__(message)
        self.field: String = field

def _assertCount(
    value: Any,
    field: String,
    funcName: String,
    minimum: Int
) -> Int:
    if (
        isinstance(value, bool)
        or not isinstance(value, int)
        or value < minimum
    ):
        raise InvalidDataError(
            f"{__name__}.{funcName}(): field '{field}' must be an integer >= {minimum}, got {value!r}.",
            field
        )
    return value

def _readRational(
    value: Any,
    field: String,
    funcName: String
) -> Rational:
    if isinstance(value, bool) or value is None:
        raise InvalidDataError(f"{__name__}.{funcName}(): field '{field}' is missing or not a number.", field)
    try:
        return toRational(value)
    except (RationalParseError, TypeError):
        raise InvalidDataError(f"{__name__}.{funcName}(): field '{field}' is not a rational, got {value!r}.", field)

@dataclass(frozen=True)
class BaseFactor:
    """
    One CSC factor (±g_a) of the base: real dimension 2d, scalar curvature
    ±2ds, class parameter x whose sign is the sign of g_a.

    >>> BaseFactor(d = 1, s = Fraction(-2), x = Fraction(4, 5))
    """
    d: Int
    s: Rational
    x: Rational

    def toDict(self) -> Map[String, Any]:
        return {
            "d": self.d,
            "s": formatRational(self.s),
            "x": formatRational(self.x)
        }

@dataclass(frozen=True)
class AdmissibleData:
    """
    >>> data = AdmissibleData.fromDict({
    ...     "d0": 0,
    ...     "dinf": 0,
    ...     "factors": [
    ...         {"d": 1, "s": "-2", "x": "0.8"},
    ...         {"d": 1, "s": "2", "x": "-0.8"}
    ...     ]
    ... })
    """
    d0: Int
    dinf: Int
    factors: Tuple[BaseFactor, ...] = ()

    @classmethod
    def fromDict(cls, payload: Map[String, Any]) -> "AdmissibleData":
        if not isinstance(payload, dict):
            raise InvalidDataError(f"{__name__}.fromDict(): admissible data must be a JSON object.", "<root>")

        d0 = _assertCount(payload.get("d0", 0), "d0", "fromDict", 0)
        dinf = _assertCount(payload.get("dinf", 0), "dinf", "fromDict", 0)

        rawFactors = payload.get("factors", [])
        if not isinstance(rawFactors, list):
            raise InvalidDataError(f"{__name__}.fromDict(): field 'factors' must be a list.", "factors")

        factors: List[BaseFactor] = []
        for (index, raw) in enumerate(rawFactors):
            prefix = f"factors[{index}]"
            if not isinstance(raw, dict):
                raise InvalidDataError(f"{__name__}.fromDict(): field '{prefix}' must be an object.", prefix)
            factors.append(
                BaseFactor(
                    d = _assertCount(raw.get("d"), f"{prefix}.d", "fromDict", 1),
                    s = _readRational(raw.get("s"), f"{prefix}.s", "fromDict"),
                    x = _readRational(raw.get("x"), f"{prefix}.x", "fromDict")
                )
            )

        return cls(d0, dinf, tuple(factors))

    def toDict(self) -> Map[String, Any]:
        return {
            "d0": self.d0,
            "dinf": self.dinf,
            "factors": [factor.toDict() for factor in self.factors]
        }

    def withX(self, xs: List[Any]) -> "AdmissibleData":
        """Same manifold, another class: replace every x_a."""
        if len(xs) != len(self.factors):
            raise ValueError(f"{__name__}.withX(): expected {len(self.factors)} x values, got {len(xs)}.")
        return replace(
            self,
            factors = tuple(
                replace(factor, x = toRational(x))
                for (factor, x) in zip(self.factors, xs)
            )
        )

@dataclass(frozen=True)
class ValidatedData:
    """
    Data that passed `validate`, with the extended index set 𝒜̂: the base
    factors followed by the frozen endpoint factors (x0 = 1, s0 = d0 + 1)
    and (x∞ = -1, s∞ = -(d∞ + 1)) when present.
    """
    data: AdmissibleData
    extended: Tuple[BaseFactor, ...]

    @property
    def d0(self) -> Int:
        return self.data.d0

    @property
    def dinf(self) -> Int:
        return self.data.dinf

    @property
    def factors(self) -> Tuple[BaseFactor, ...]:
        return self.data.factors

    @property
    def isSymmetric(self) -> bool:
        """Invariant under z -> -z: d0 == d∞ and the factors pair up as (d, s, x) <-> (d, -s, -x)."""
        if self.d0 != self.dinf:
            return False
        pending = list(self.factors)
        while pending:
            factor = pending.pop()
            mirror = BaseFactor(factor.d, -factor.s, -factor.x)
            if mirror not in pending:
                return False
            pending.remove(mirror)
        return True

def validate(data: AdmissibleData) -> ValidatedData:
    """
    >>> validate(AdmissibleData(0, 0, (BaseFactor(1, Fraction(-2), Fraction(1)), )))
    ConeViolationError: pygqe.admissible.validate(): factors[0].x = 1 is outside 0 < |x| < 1.
    """
    _assertCount(data.d0, "d0", "validate", 0)
    _assertCount(data.dinf, "dinf", "validate", 0)

    for (index, factor) in enumerate(data.factors):
        _assertCount(factor.d, f"factors[{index}].d", "validate", 1)
        if not (0 < abs(factor.x) < 1):
            raise ConeViolationError(
                f"{__name__}.validate(): factors[{index}].x = {formatRational(factor.x)} is outside 0 < |x| < 1."
            )

    extended: List[BaseFactor] = list(data.factors)
    if data.d0 > 0:
        extended.append(BaseFactor(data.d0, Fraction(data.d0 + 1), Fraction(1)))
    if data.dinf > 0:
        extended.append(BaseFactor(data.dinf, Fraction(-(data.dinf + 1)), Fraction(-1)))

    if not extended:
        raise EmptyExtendedIndexError(f"{__name__}.validate(): no base factors and d0 = dinf = 0.")

    return ValidatedData(data, tuple(extended))

def _linearFactor(factor: BaseFactor) -> Polynomial:
    return Polynomial.linear(1, factor.x)

def buildPc(data: ValidatedData) -> Polynomial:
    """
    p_c(z) = prod over 𝒜̂ of (1 + x_a z)^{d_a}.

    >>> buildPc(validate(AdmissibleData(2, 1)))
    Polynomial(1 + t - t^2 - t^3)
    """
    pc = Polynomial.constant(1)
    for factor in data.extended:
        pc = pc * _linearFactor(factor) ** factor.d
    return pc

def buildSigma(data: ValidatedData) -> Polynomial:
    """
    sum over 𝒜̂ of d_a s_a x_a p_c(z) / (1 + x_a z), assembled exactly: each
    term drops one power of its own linear factor.
    """
    sigma = Polynomial()
    for (index, factor) in enumerate(data.extended):
        term = Polynomial.constant(factor.d * factor.s * factor.x)
        for (other, cofactor) in enumerate(data.extended):
            power = cofactor.d - 1 if other == index else cofactor.d
            term = term * _linearFactor(cofactor) ** power
        sigma = sigma + term
    return sigma

@dataclass(frozen=True)
class BaseQuantities:
    """
    >>> q = baseQuantities(validate(sixData))
    >>> (q.alpha0, q.beta0, q.scalBar)
    (Fraction(11, 6), Fraction(-5, 2), Fraction(-30, 11))
    """
    pc: Polynomial
    sigma: Polynomial
    alpha0: Rational
    alpha1: Rational
    beta0: Rational
    scalBar: Rational
    ell: Rational

def baseQuantities(data: ValidatedData) -> BaseQuantities:
    pc = buildPc(data)
    sigma = buildSigma(data)
    t = Polynomial.monomial(1)

    alpha0 = pc.definiteIntegral(-1, 1)
    alpha1 = (pc * t).definiteIntegral(-1, 1)
    beta0 = pc.evaluate(1) + pc.evaluate(-1) + sigma.definiteIntegral(-1, 1)

    if alpha0 <= 0 or isolateRoots(pc, -1, 1):
        raise ConeViolationError(f"{__name__}.baseQuantities(): p_c is not positive on (-1, 1).")

    quantities = BaseQuantities(
        pc = pc,
        sigma = sigma,
        alpha0 = alpha0,
        alpha1 = alpha1,
        beta0 = beta0,
        scalBar = 2 * beta0 / alpha0,
        ell = -alpha1 / alpha0
    )
    logger.debug(
        "base quantities: alpha0=%s beta0=%s scalBar=%s l=%s",
        alpha0, beta0, quantities.scalBar, quantities.ell
    )
    return quantities
