"""Expected Shortfall on discrete distributions.

Two exact representations are implemented: the tail-expectation form used
in production (:func:`es_tail`) and the quantile-integral form
(:func:`es_integral`) which walks the quantile step function segment by
segment. They share no code beyond the cumulative-mass table, so comparing
them catches off-by-one-atom mistakes at quantile atoms.

Values are in loss units: positive means loss.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Iterable
from dataclasses import dataclass

from .distribution import (
    DiscreteDistribution,
    check_level,
    essinf,
    expectation,
    lower_quantile_index,
)
from .errors import RiskMixError

# relative tolerance for cross-representation agreement
REL_TOL = 1e-9


class Representation(enum.Enum):
    INTEGRAL = "Integral"
    TAIL_EXPECTATION = "TailExpectation"
    LEVEL0 = "Level0"
    LEVEL1 = "Level1"


@dataclass(frozen=True)
class EsValue:
    value: float
    level: float
    representation: Representation

    def __float__(self) -> float:
        return self.value


class RepresentationMismatch(RiskMixError, ArithmeticError):
    """Raised by ``es(..., verify=True)`` when the two exact forms disagree."""


def es_tail(d: DiscreteDistribution, alpha: float) -> float:
    """-(1/alpha) (E[X 1{X<q}] + q (alpha - P(X<q))) with q the lower alpha-quantile."""
    alpha = check_level(alpha, open_low=True)
    k = lower_quantile_index(d, alpha)
    q = d.values[k]
    below = d.cumulative[k - 1] if k else 0.0
    head = d.partial[k - 1] if k else 0.0
    # divide before multiplying so subnormal levels do not underflow q * alpha
    return -(head / alpha) - q * ((alpha - below) / alpha)


def es_integral(d: DiscreteDistribution, alpha: float) -> float:
    """-(1/alpha) times the integral of the lower quantile over (0, alpha]."""
    alpha = check_level(alpha, open_low=True)
    pieces = []
    lo = 0.0
    for v, hi in zip(d.values, d.cumulative):
        top = min(hi, alpha)
        if top > lo:
            pieces.append(v * ((top - lo) / alpha))
        if hi >= alpha:
            break
        lo = hi
    return -math.fsum(pieces)


def es(d: DiscreteDistribution, alpha: float, *, verify: bool = False) -> EsValue:
    """Expected Shortfall at any level in [0, 1].

    Level 0 is minus the essential infimum and level 1 is minus the mean.
    With ``verify=True`` interior levels are recomputed by the integral form
    and a :class:`RepresentationMismatch` is raised on disagreement.
    """
    alpha = check_level(alpha)
    if alpha == 0.0:
        return EsValue(0.0 - essinf(d), 0.0, Representation.LEVEL0)
    if alpha == 1.0:
        return EsValue(0.0 - expectation(d), 1.0, Representation.LEVEL1)
    value = es_tail(d, alpha) + 0.0  # fold -0.0
    if verify:
        other = es_integral(d, alpha)
        if abs(other - value) > REL_TOL * (1.0 + abs(value)):
            raise RepresentationMismatch(
                f"tail form {value!r} vs integral form {other!r} at level {alpha!r}"
            )
    return EsValue(value, alpha, Representation.TAIL_EXPECTATION)


def es_value(d: DiscreteDistribution, alpha: float) -> float:
    return es(d, alpha).value


def es_curve(d: DiscreteDistribution, grid: Iterable[float]) -> list[tuple[float, float]]:
    levels = sorted(check_level(a) for a in grid)
    return [(a, es(d, a).value) for a in levels]
