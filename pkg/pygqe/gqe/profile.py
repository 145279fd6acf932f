import logging

from dataclasses import dataclass
from fractions import Fraction

from pygqe.admissible import (
    BaseQuantities,
    ValidatedData
)
from pygqe.gqe.mode import Mode
from pygqe.ratpoly import (
    Polynomial,
    toRational
)
from pygqe.types import (
    String,
    Int,
    Rational,
    Optional,
    Any
)

logger = logging.getLogger(__name__)

class DegenerateProfileError(Exception):
    def __init__(self, message: String):
        super().__init__(message)

class BoundaryIdentityError(Exception):
    def __init__(self, message: String):
        super().__init__(message)

@dataclass(frozen=True)
class ProfilePolynomial:
    """
    The exact polynomial P(t) with P(-1) = 2 p_c(-1) and

        P'(t) = 2 sigma(t) - (2 beta0 / alpha0) p_c(t) [- b (t + l) p_c(t)],

    sigma being the exact sum over 𝒜̂ of d_a s_a x_a p_c(t) / (1 + x_a t).
    """
    P: Polynomial
    mode: Mode
    b: Rational
    source: BaseQuantities

    @property
    def rhs(self) -> Polynomial:
        """Right-hand side E(z) of F'' - k F' = E(z); equal to P'."""
        return self.P.derivative()

def equationRhs(
    q: BaseQuantities,
    b: Any = 0
) -> Polynomial:
    """2 sigma - (Scal_bar + b (t + l)) p_c, the forcing term of the profile ODE."""
    b = toRational(b)
    rhs = q.sigma.scale(2) - q.pc.scale(q.scalBar)
    if b != 0:
        rhs = rhs - q.pc * Polynomial.linear(q.ell, 1).scale(b)
    return rhs

def buildP(
    q: BaseQuantities,
    data: ValidatedData,
    mode: Mode | String = Mode.Gqe,
    b: Optional[Any] = None
) -> ProfilePolynomial:
    """
    >>> profile = buildP(q, data)
    >>> profile.P
    Polynomial(-14/11*t - 5/22*t^3)
    """
    mode = Mode(mode)
    if mode is Mode.Gqe:
        if b not in (None, 0):
            raise ValueError(f"{__name__}.buildP(): b is only meaningful in generalized mode.")
        b = Fraction(0)
    else:
        b = toRational(b if b is not None else 0)

    primitive = equationRhs(q, b).antiderivative()
    P = primitive - primitive.evaluate(-1) + 2 * q.pc.evaluate(-1)

    if (
        P.evaluate(-1) != 2 * q.pc.evaluate(-1)
        or P.evaluate(1) != -2 * q.pc.evaluate(1)
    ):
        raise BoundaryIdentityError(f"{__name__}.buildP(): P(±1) != ∓2 p_c(±1) for {data.data}.")

    logger.debug("P(t) = %s (mode %s, b = %s)", P, mode.value, b)
    return ProfilePolynomial(P, mode, b, q)

@dataclass(frozen=True)
class EndpointProfile:
    # sign of P just right of -1 and just left of +1
    signMinus: Int
    signPlus: Int
    # vanishing orders of P at -1 and +1
    orderMinus: Int
    orderPlus: Int
    # sign of the first nonvanishing derivative at each endpoint
    derivativeSignMinus: Int
    derivativeSignPlus: Int

def _firstNonvanishing(
    P: Polynomial,
    x: Int,
    funcName: String
) -> tuple:
    derivative = P
    for order in range(P.degree + 1):
        value = derivative.evaluate(x)
        if value != 0:
            return (order, 1 if value > 0 else -1)
        derivative = derivative.derivative()
    raise DegenerateProfileError(f"{__name__}.{funcName}(): every derivative of P vanishes at {x}.")

def endpointSignProfile(
    profile: ProfilePolynomial,
    data: ValidatedData
) -> EndpointProfile:
    """
    Exact local behaviour of P at the endpoints, from the first derivative
    that does not vanish there.

    >>> endpointSignProfile(profile, data)
    EndpointProfile(signMinus=1, signPlus=-1, orderMinus=0, orderPlus=0, derivativeSignMinus=1, derivativeSignPlus=-1)
    """
    (orderMinus, derivativeMinus) = _firstNonvanishing(profile.P, -1, "endpointSignProfile")
    (orderPlus, derivativePlus) = _firstNonvanishing(profile.P, 1, "endpointSignProfile")

    if (orderMinus, orderPlus) != (data.d0, data.dinf):
        logger.warning(
            "vanishing orders (%d, %d) differ from (d0, dinf) = (%d, %d)",
            orderMinus, orderPlus, data.d0, data.dinf
        )

    return EndpointProfile(
        signMinus = derivativeMinus,
        signPlus = derivativePlus * (-1) ** orderPlus,
        orderMinus = orderMinus,
        orderPlus = orderPlus,
        derivativeSignMinus = derivativeMinus,
        derivativeSignPlus = derivativePlus
    )
