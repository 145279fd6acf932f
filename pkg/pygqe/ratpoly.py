"""
Exact univariate polynomials over the rationals.

`Polynomial` wraps a `sympy.Poly` in t over QQ and hands values back as
`fractions.Fraction`, constant term first. Root counts come from sympy's
Sturm-sequence counter and isolating intervals from its real-root isolation,
so both are exact and intervals can be refined to any width.
"""
import logging

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational as _RationalNumber

import sympy

from sympy import (
    QQ,
    Poly
)

from pygqe.types import (
    String,
    Boolean,
    Int,
    Rational,
    Real,
    List,
    Tuple,
    Optional,
    Any,
    Unit
)

logger = logging.getLogger(__name__)

T = sympy.Symbol("t")

class ZeroPolynomialError(Exception):
    def __init__(self, message: String):
        super().__init__(message)

class NotDivisibleError(Exception):
    def __init__(self, message: String):
        super().__init__(message)

class RationalParseError(Exception):
    def __init__(self, message: String):
        super().__init__(message)

class Op(Enum):
    Add = "add"
    Sub = "sub"
    Mul = "mul"
    Scale = "scale"

def toRational(value: Any) -> Rational:
    """
    >>> toRational("-0.75")
    Fraction(-3, 4)
    >>> toRational("7/11")
    Fraction(7, 11)
    >>> toRational(0.8)
    Fraction(4, 5)
    """
    if isinstance(value, bool):
        raise TypeError(f"{__name__}.toRational()")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, _RationalNumber):
        return Fraction(value)
    if isinstance(value, (float, str)):
        text = repr(value) if isinstance(value, float) else value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise RationalParseError(f"{__name__}.toRational(): cannot read {value!r} as a rational.")
    raise TypeError(f"{__name__}.toRational()")

def formatRational(value: Rational) -> String:
    """
    Decimal string when the value has a finite decimal expansion, else "p/q".

    >>> formatRational(Fraction(-3, 4))
    '-0.75'
    >>> formatRational(Fraction(-14, 11))
    '-14/11'
    """
    value = toRational(value)
    rest = value.denominator
    twos = fives = 0
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    while rest % 5 == 0:
        rest //= 5
        fives += 1

    if rest != 1:
        return f"{value.numerator}/{value.denominator}"

    places = max(twos, fives)
    sign = "-" if value < 0 else ""
    scaled = abs(value.numerator) * 10 ** places // value.denominator
    if places == 0:
        return f"{sign}{scaled}"

    digits = str(scaled).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"

def _toSympy(value: Any) -> sympy.Rational:
    value = toRational(value)
    return sympy.Rational(value.numerator, value.denominator)

def _toFraction(value: Any) -> Rational:
    return Fraction(int(value.p), int(value.q))

class Polynomial:
    """
    Immutable polynomial with exact rational coefficients.

    >>> p = Polynomial([1, Fraction(1, 2)]) * Polynomial([1, Fraction(-1, 2)])
    >>> p
    Polynomial(1 - 1/4*t^2)
    >>> p.definiteIntegral(-1, 1)
    Fraction(11, 6)
    """
    __slots__ = ("_poly", "_coeffs")

    def __init__(self, coeffs: List[Any] = ()) -> Unit:
        values: List[Any] = [_toSympy(c) for c in coeffs]
        self._adopt(Poly(list(reversed(values)) or [0], T, domain = QQ))

    def _adopt(self, poly: Poly) -> Unit:
        coeffs: List[Rational] = [_toFraction(c) for c in reversed(poly.all_coeffs())]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "_poly", poly)
        object.__setattr__(self, "_coeffs", tuple(coeffs))

    @classmethod
    def fromPoly(cls, poly: Poly) -> "Polynomial":
        """
        >>> Polynomial.fromPoly(Poly(T ** 2 - 1, T))
        Polynomial(-1 + t^2)
        """
        result = cls.__new__(cls)
        result._adopt(poly.set_domain(QQ))
        return result

    def __setattr__(self, name, value):
        raise AttributeError(f"{__name__}.Polynomial is immutable.")

    @classmethod
    def constant(cls, value: Any) -> "Polynomial":
        return cls([value])

    @classmethod
    def monomial(
        cls,
        degree: Int,
        coeff: Any = 1
    ) -> "Polynomial":
        return cls([0] * degree + [coeff])

    @classmethod
    def linear(
        cls,
        c0: Any,
        c1: Any
    ) -> "Polynomial":
        """
        >>> Polynomial.linear(1, Fraction(4, 5))
        Polynomial(1 + 4/5*t)
        """
        return cls([c0, c1])

    @property
    def poly(self) -> Poly:
        return self._poly

    @property
    def coefficients(self) -> Tuple[Rational, ...]:
        return self._coeffs

    @property
    def degree(self) -> Int:
        """Degree, with -1 for the zero polynomial."""
        return len(self._coeffs) - 1

    def isZero(self) -> Boolean:
        return not self._coeffs

    @property
    def leading(self) -> Rational:
        return self._coeffs[-1] if self._coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._coeffs == other._coeffs
        if isinstance(other, (_RationalNumber, Fraction)):
            return self._coeffs == Polynomial.constant(other)._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self._coeffs)

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self._coeffs:
            return "0"

        terms: List[String] = []
        for (power, coeff) in enumerate(self._coeffs):
            if coeff == 0:
                continue
            sign = "-" if coeff < 0 else "+"
            magnitude = abs(coeff)
            if power == 0:
                body = f"{magnitude}"
            else:
                monomial = "t" if power == 1 else f"t^{power}"
                body = monomial if magnitude == 1 else f"{magnitude}*{monomial}"
            terms.append(f"{sign} {body}")

        text = " ".join(terms)
        return text[2:] if text.startswith("+ ") else f"-{text[2:]}"

    def _coerce(self, other: Any) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(other)

    def __add__(self, other):
        return Polynomial.fromPoly(self._poly + self._coerce(other)._poly)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial.fromPoly(-self._poly)

    def __sub__(self, other):
        return Polynomial.fromPoly(self._poly - self._coerce(other)._poly)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        return Polynomial.fromPoly(self._poly * other._poly)

    __rmul__ = __mul__

    def __pow__(self, exponent: Int):
        if not isinstance(exponent, int) or exponent < 0:
            raise TypeError(f"{__name__}.Polynomial.__pow__()")
        return Polynomial.fromPoly(self._poly ** exponent)

    def scale(self, factor: Any) -> "Polynomial":
        return Polynomial.fromPoly(self._poly.mul_ground(_toSympy(factor)))

    def evaluate(self, x: Any) -> Rational:
        """Exact value at a rational point."""
        if not self._coeffs:
            return Fraction(0)
        return _toFraction(self._poly.eval(_toSympy(x)))

    def evalFloat(self, x: Real) -> Real:
        """
        Value at a float point, computed exactly and rounded once.

        `Fraction(x)` is the exact binary value of `x`, so the only error is
        the final rounding, even where the polynomial nearly vanishes.
        """
        return float(self.evaluate(Fraction(x)))

    def __call__(self, x: Any):
        if isinstance(x, float):
            return self.evalFloat(x)
        return self.evaluate(x)

    def derivative(self, order: Int = 1) -> "Polynomial":
        """
        >>> Polynomial([0, Fraction(-14, 11), 0, Fraction(-5, 22)]).derivative()
        Polynomial(-14/11 - 15/22*t^2)
        """
        poly = self._poly
        for _ in range(order):
            poly = poly.diff(T)
        return Polynomial.fromPoly(poly)

    def antiderivative(self) -> "Polynomial":
        """Antiderivative vanishing at t = 0."""
        return Polynomial.fromPoly(self._poly.integrate(T))

    def definiteIntegral(
        self,
        lo: Any,
        hi: Any
    ) -> Rational:
        """
        >>> Polynomial([1, 0, Fraction(-1, 4)]).definiteIntegral(-1, 1)
        Fraction(11, 6)
        """
        lo = toRational(lo)
        hi = toRational(hi)
        if lo > hi:
            raise ValueError(f"{__name__}.Polynomial.definiteIntegral(): lo > hi.")

        primitive = self.antiderivative()
        return primitive.evaluate(hi) - primitive.evaluate(lo)

    def divmod(self, divisor: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        if divisor.isZero():
            raise ZeroPolynomialError(f"{__name__}.Polynomial.divmod(): division by the zero polynomial.")
        (quotient, remainder) = self._poly.div(divisor._poly)
        return (Polynomial.fromPoly(quotient), Polynomial.fromPoly(remainder))

    def __floordiv__(self, divisor):
        return self.divmod(divisor)[0]

    def __mod__(self, divisor):
        return self.divmod(divisor)[1]

    def monic(self) -> "Polynomial":
        if self.isZero():
            return self
        return Polynomial.fromPoly(self._poly.monic())

    def gcd(self, other: "Polynomial") -> "Polynomial":
        return Polynomial.fromPoly(self._poly.gcd(other._poly)).monic()

    def squarefreePart(self) -> "Polynomial":
        if self.degree <= 0:
            return self
        return Polynomial.fromPoly(self._poly.sqf_part()).monic()

    def maxNorm(self) -> Rational:
        return max((abs(c) for c in self._coeffs), default = Fraction(0))

    def l1Norm(self) -> Rational:
        return sum((abs(c) for c in self._coeffs), Fraction(0))

    def floatCoefficients(self) -> Tuple[Real, ...]:
        return tuple(float(c) for c in self._coeffs)

def polyArith(
    p: Polynomial,
    q: Polynomial | Any,
    op: Op | String
) -> Polynomial:
    """
    >>> polyArith(Polynomial([1, 1]), Polynomial([1, -1]), Op.Mul)
    Polynomial(1 - t^2)
    >>> polyArith(Polynomial([1, 1]), Fraction(1, 2), "scale")
    Polynomial(1/2 + 1/2*t)
    """
    op = Op(op)
    if op is Op.Add:
        return p + q
    if op is Op.Sub:
        return p - q
    if op is Op.Mul:
        return p * q
    return p.scale(q)

@dataclass(frozen = True)
class RootInterval:
    """
    Interval [lo, hi] holding exactly one root, which lies strictly inside
    unless lo == hi, in which case lo is the exact root.
    """
    lo: Rational
    hi: Rational

    @property
    def exact(self) -> Boolean:
        return self.lo == self.hi

    @property
    def midpoint(self) -> Rational:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Rational:
        return self.hi - self.lo

def _withoutRootsAt(
    squarefree: Poly,
    points: Tuple[Rational, ...]
) -> Poly:
    # a square-free polynomial has each root once, so one division suffices
    for x in set(points):
        if squarefree.degree() >= 1 and squarefree.eval(_toSympy(x)) == 0:
            squarefree = squarefree.quo(Poly([1, -_toSympy(x)], T, domain = QQ))
    return squarefree

def countRoots(
    p: Polynomial,
    lo: Any,
    hi: Any
) -> Int:
    """
    Distinct roots in the open interval (lo, hi).

    >>> countRoots(Polynomial([-4, 0, 12]), -1, 1)
    2
    """
    if p.isZero():
        raise ZeroPolynomialError(f"{__name__}.countRoots(): p is identically zero.")
    lo = toRational(lo)
    hi = toRational(hi)
    if p.degree == 0 or lo >= hi:
        return 0

    # sympy counts the closed interval [lo, hi]
    count = p.poly.count_roots(_toSympy(lo), _toSympy(hi))
    return count - sum(1 for x in (lo, hi) if p.evaluate(x) == 0)

def isolateRoots(
    p: Polynomial,
    lo: Any = -1,
    hi: Any = 1,
    width: Optional[Any] = None
) -> List[RootInterval]:
    """
    One isolating interval per distinct real root in the open interval
    (lo, hi), sorted left to right; narrower than `width` when given.

    >>> [interval.exact for interval in isolateRoots(Polynomial([0, -1, 0, 2]))]
    [False, True, False]
    """
    if p.isZero():
        raise ZeroPolynomialError(f"{__name__}.isolateRoots(): p is identically zero.")
    lo = toRational(lo)
    hi = toRational(hi)
    if p.degree == 0 or lo >= hi:
        return []

    inner = _withoutRootsAt(p.poly.sqf_part(), (lo, hi))
    if inner.degree() <= 0:
        return []

    eps = None if width is None else _toSympy(width)
    found = [
        RootInterval(_toFraction(a), _toFraction(b))
        for (a, b) in inner.intervals(eps = eps, inf = _toSympy(lo), sup = _toSympy(hi), sqf = True)
    ]
    found.sort(key = lambda interval: (interval.lo, interval.hi))
    logger.debug("isolated %d root(s) of %s in (%s, %s)", len(found), p, lo, hi)
    return found

def refineRoot(
    p: Polynomial,
    interval: RootInterval,
    width: Any
) -> RootInterval:
    """Shrink an isolating interval from `isolateRoots` below `width`."""
    if interval.exact:
        return interval

    squarefree = _withoutRootsAt(p.poly.sqf_part(), (interval.lo, interval.hi))
    (a, b) = squarefree.refine_root(_toSympy(interval.lo), _toSympy(interval.hi), eps = _toSympy(width))
    return RootInterval(_toFraction(a), _toFraction(b))

def deflateEndpointFactors(
    p: Polynomial,
    mMinus: Int,
    mPlus: Int
) -> Polynomial:
    """
    Exact quotient of p by (1+t)^mMinus (1-t)^mPlus.

    >>> deflateEndpointFactors(Polynomial([1, 1, -1, -1]), 2, 1)
    Polynomial(1)
    """
    if mMinus < 0 or mPlus < 0:
        raise ValueError(f"{__name__}.deflateEndpointFactors(): negative multiplicity.")

    divisor = Polynomial.linear(1, 1) ** mMinus * Polynomial.linear(1, -1) ** mPlus
    (quotient, remainder) = p.divmod(divisor)
    if not remainder.isZero():
        raise NotDivisibleError(
            f"{__name__}.deflateEndpointFactors(): (1+t)^{mMinus}(1-t)^{mPlus} does not divide {p}."
        )
    return quotient

def supNorm(
    p: Polynomial,
    lo: Any = -1,
    hi: Any = 1
) -> Real:
    """max |p| on the closed interval [lo, hi], from endpoints and critical points."""
    lo = toRational(lo)
    hi = toRational(hi)
    candidates: List[Rational] = [lo, hi]
    slope = p.derivative()
    if slope.degree >= 1:
        candidates += [
            interval.midpoint
            for interval in isolateRoots(slope, lo, hi, width = Fraction(1, 2 ** 40))
        ]
    return max(abs(float(p.evaluate(x))) for x in candidates)
