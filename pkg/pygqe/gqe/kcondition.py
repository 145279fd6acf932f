"""
The k-condition: roots of I(k) = ∫_{-1}^{1} e^{-kt} P(t) dt.

Integrals of e^{-kt} p(t) are evaluated two ways. For |k| >= kSwitch the
closed form [-e^{-kt} Q(t)] with Q = sum_j p^(j) / k^(j+1) is used; below it,
the moment series sum_m (-k)^m / m! ∫ t^m p(t) dt, whose moments are exact.
"""
import logging
import math

from dataclasses import dataclass

import numpy as np

from scipy.optimize import brentq

from pygqe.config import SolverConfig
from pygqe.gqe.profile import ProfilePolynomial
from pygqe.ratpoly import (
    Polynomial,
    isolateRoots
)
from pygqe.types import (
    String,
    Int,
    Real,
    List,
    Tuple,
    Optional
)

logger = logging.getLogger(__name__)

_MAX_SERIES_TERMS = 400

class NoRootInWindowError(Exception):
    def __init__(
        self,
        message: String,
        window: Real
    ):
        super().__init__(message)
        self.window: Real = window

def _horner(
    coeffs: Tuple[Real, ...],
    x: Real
) -> Real:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc

class ExpWeightedIntegral:
    """
    Integrals of e^{-kt} p(t) with lower limit -1, for a fixed polynomial p.

    Everything that depends on p alone is computed once here; instances are
    read-only afterwards and may be shared between threads.

    >>> integral = ExpWeightedIntegral(profile.P)
    >>> integral.total(0.0)
    0.0
    """
    def __init__(
        self,
        p: Polynomial,
        kSwitch: Real = 1.0,
        seriesTol: Real = 1e-18
    ):
        self._p: Polynomial = p
        self._kSwitch: Real = kSwitch
        self._seriesTol: Real = seriesTol

        derivatives: List[Polynomial] = []
        current = p
        while not current.isZero():
            derivatives.append(current)
            current = current.derivative()

        self._derivatives: Tuple[Tuple[Real, ...], ...] = tuple(d.floatCoefficients() for d in derivatives)
        self._atMinus: Tuple[Real, ...] = tuple(float(d.evaluate(-1)) for d in derivatives)
        self._atPlus: Tuple[Real, ...] = tuple(float(d.evaluate(1)) for d in derivatives)
        self._coeffs: Tuple[Real, ...] = p.floatCoefficients()
        self._norm: Real = float(p.l1Norm())

    @property
    def norm(self) -> Real:
        """||p||_1, the scale for residual tolerances."""
        return self._norm

    def _useSeries(self, k: Real) -> bool:
        return abs(k) < self._kSwitch

    def _q(
        self,
        k: Real,
        values: Tuple[Real, ...]
    ) -> Real:
        # Q = sum_j p^(j) / k^(j+1), summed from the highest derivative
        acc = 0.0
        for value in reversed(values):
            acc = (acc + value) / k
        return acc

    def _qAt(
        self,
        k: Real,
        z: Real
    ) -> Real:
        return self._q(k, tuple(_horner(coeffs, z) for coeffs in self._derivatives))

    def _series(
        self,
        k: Real,
        z: Real
    ) -> Real:
        # sum_m (-k)^m / m! * R_m(z), R_m(z) = ∫_{-1}^{z} t^m p(t) dt
        total = 0.0
        weight = 1.0
        for m in range(_MAX_SERIES_TERMS):
            moment = 0.0
            for (i, c) in enumerate(self._coeffs):
                n = m + i + 1
                moment += c * (z ** n - (-1.0) ** n) / n
            total += weight * moment
            weight *= -k / (m + 1)
            if abs(weight) * 2.0 < self._seriesTol:
                break
        return total

    def total(self, k: Real) -> Real:
        """I(k) = ∫_{-1}^{1} e^{-kt} p(t) dt."""
        if self._useSeries(k):
            return self._series(k, 1.0)
        return math.exp(k) * self._q(k, self._atMinus) - math.exp(-k) * self._q(k, self._atPlus)

    def scaledTotal(self, k: Real) -> Real:
        """e^{-|k|} I(k): same sign as I(k), finite on any k-window."""
        if self._useSeries(k):
            return math.exp(-abs(k)) * self._series(k, 1.0)
        return (
            math.exp(k - abs(k)) * self._q(k, self._atMinus)
            - math.exp(-k - abs(k)) * self._q(k, self._atPlus)
        )

    def partial(
        self,
        k: Real,
        z: Real
    ) -> Real:
        """H(z) = ∫_{-1}^{z} e^{-kt} p(t) dt."""
        if self._useSeries(k):
            return self._series(k, z)
        return math.exp(k) * self._q(k, self._atMinus) - math.exp(-k * z) * self._qAt(k, z)

    @staticmethod
    def anchor(k: Real) -> Real:
        """Endpoint the momentum profile is integrated from: -1 for k <= 0, 1 for k > 0."""
        return 1.0 if k > 0 else -1.0

    def anchoredPartial(
        self,
        k: Real,
        z: Real
    ) -> Real:
        """
        e^{kz} ∫_{-1}^{z} e^{-kt} p(t) dt for k <= 0 and
        -e^{kz} ∫_{z}^{1} e^{-kt} p(t) dt for k > 0.

        Both agree where I(k) = 0. The kernel e^{k(z-t)} never exceeds 1
        here, and the value at the far endpoint is ∓e^{-|k|} I(k), the same
        quantity `scaledTotal` returns.
        """
        if z == self.anchor(k):
            return 0.0
        if self._useSeries(k):
            tail = self._series(k, 1.0) if k > 0 else 0.0
            return math.exp(k * z) * (self._series(k, z) - tail)
        if k > 0:
            return math.exp(k * (z - 1.0)) * self._q(k, self._atPlus) - self._qAt(k, z)
        return math.exp(k * (z + 1.0)) * self._q(k, self._atMinus) - self._qAt(k, z)

def evalI(
    profile: ProfilePolynomial,
    k: Real,
    config: Optional[SolverConfig] = None
) -> Real:
    """
    >>> evalI(profile, 0.0)
    0.0
    """
    config = config or SolverConfig()
    return ExpWeightedIntegral(profile.P, config.kSwitch, config.seriesTol).total(k)

def opennessDerivative(
    profile: ProfilePolynomial,
    k: Real,
    config: Optional[SolverConfig] = None
) -> Real:
    """
    ∂I/∂k = -∫_{-1}^{1} t e^{-kt} P(t) dt.

    Positive at a certified root, which makes the root persist under small
    changes of the class.
    """
    config = config or SolverConfig()
    weighted = profile.P * Polynomial.monomial(1)
    return -ExpWeightedIntegral(weighted, config.kSwitch, config.seriesTol).total(k)

@dataclass(frozen=True)
class KSolution:
    ks: Tuple[Real, ...]
    window: Real
    # distinct roots of P in (-1, 1)
    rootCount: Int
    # "monotone" (single interior root of P) or "grid"
    method: String

def _bracketMonotone(
    scaled,
    kMax: Real
) -> Tuple[Real, Real]:
    start = min(1.0, kMax)
    lo, hi = -start, start
    while scaled(lo) > 0:
        if lo <= -kMax:
            return None
        lo = max(2.0 * lo, -kMax)
    while scaled(hi) < 0:
        if hi >= kMax:
            return None
        hi = min(2.0 * hi, kMax)
    return (lo, hi)

def _refine(
    scaled,
    lo: Real,
    hi: Real
) -> Real:
    return brentq(scaled, lo, hi, xtol = 1e-15, rtol = 4 * np.finfo(float).eps, maxiter = 500)

def solveK(
    profile: ProfilePolynomial,
    config: Optional[SolverConfig] = None
) -> KSolution:
    """
    Roots of I(k) in [-kMax, kMax].

    With exactly one interior root t0 of P, G(k) = e^{k t0} I(k) is strictly
    increasing, so the unique root is bracketed and refined. Otherwise every
    sign change of I on a grid over the window is refined.

    >>> solveK(profile).ks
    (0.0,)
    """
    config = config or SolverConfig()
    integral = ExpWeightedIntegral(profile.P, config.kSwitch, config.seriesTol)
    scaled = integral.scaledTotal
    kMax = float(config.kMax)

    rootCount = len(isolateRoots(profile.P, -1, 1))
    exactZero = profile.P.definiteIntegral(-1, 1) == 0

    found: List[Real] = [0.0] if exactZero else []
    if rootCount == 1:
        method = "monotone"
        if not exactZero:
            bracket = _bracketMonotone(scaled, kMax)
            if bracket is not None:
                logger.debug("k bracket [%g, %g]", *bracket)
                found.append(_refine(scaled, *bracket))
    else:
        method = "grid"
        grid = np.union1d(np.linspace(-kMax, kMax, config.gridPoints), [0.0])
        values = [scaled(float(k)) for k in grid]
        for (index, (a, b)) in enumerate(zip(grid, grid[1:])):
            fa, fb = values[index], values[index + 1]
            if fb == 0.0:
                found.append(float(b))
            elif fa != 0.0 and (fa < 0.0) != (fb < 0.0):
                found.append(_refine(scaled, float(a), float(b)))

    if exactZero:
        # the exact root k = 0 wins over its floating-point neighbours
        found = [0.0] + [k for k in found if abs(k) > 1e-9]

    limit = config.tol * max(integral.norm, 1.0)
    ks: List[Real] = []
    for k in sorted(found):
        if ks and abs(k - ks[-1]) <= 1e-12 * max(1.0, abs(k)):
            continue
        residual = abs(scaled(k))
        if residual > limit:
            logger.warning("dropping k = %r: |e^-|k| I(k)| = %.3e exceeds %.3e", k, residual, limit)
            continue
        ks.append(k)

    if not ks:
        reason = "no root of I(k) within tolerance" if found else "no sign change of I(k)"
        raise NoRootInWindowError(
            f"{__name__}.solveK(): {reason} in [-{kMax:g}, {kMax:g}].",
            kMax
        )

    logger.debug("k roots %s (%s, %d interior root(s) of P)", ks, method, rootCount)
    return KSolution(tuple(ks), kMax, rootCount, method)
