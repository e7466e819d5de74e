"""Level decomposition of ES over a mixture, and concavity gaps.

For a mixture xi of X_1..X_n with weights beta and a level alpha in (0, 1),
put q = q_alpha(xi) and

    alpha_j = P(X_j < q) + P(X_j = q) (alpha - P(xi < q)) / P(xi = q).

Then sum_j beta_j alpha_j = alpha and

    ES_alpha(xi) = sum_j (alpha_j beta_j / alpha) ES_{alpha_j}(X_j),

from which ES_alpha(xi) >= sum_j beta_j ES_alpha(X_j) follows.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass

from .distribution import (
    DiscreteDistribution,
    Weights,
    as_weights,
    check_level,
    essinf,
    lower_quantile,
    mix,
    prob_eq,
    prob_lt,
)
from .errors import LengthMismatch
from .es import es_value

REL_TOL = 1e-9
# |sum beta_j alpha_j - alpha| allowed by the level bookkeeping
LEVEL_TOL = 1e-12


def scale_of(*xs: float) -> float:
    return 1.0 + max(abs(x) for x in xs)


@dataclass(frozen=True)
class LemmaReport:
    alpha: float
    q_alpha: float
    # None marks a zero-weight component, which takes no part in the mixture
    alphas: list[float | None]
    weighted_level_sum: float
    lhs: float
    rhs: float
    decomposition_residual: float

    @property
    def ok(self) -> bool:
        return (
            abs(self.weighted_level_sum - self.alpha) <= LEVEL_TOL
            and abs(self.decomposition_residual) <= REL_TOL * (1.0 + abs(self.lhs))
        )

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GapReport:
    alpha: float | None
    lhs: float
    rhs: float
    gap: float
    equality_expected: bool

    @property
    def tolerance(self) -> float:
        return REL_TOL * scale_of(self.lhs, self.rhs)

    @property
    def ok(self) -> bool:
        if self.gap < -self.tolerance:
            return False
        return not self.equality_expected or abs(self.gap) <= self.tolerance

    def to_json(self) -> dict:
        return asdict(self)


def _check_lengths(components: Sequence[DiscreteDistribution], beta: Weights) -> None:
    if len(components) != len(beta):
        raise LengthMismatch(f"{len(components)} components but {len(beta)} weights")


def _construct(components, beta, alpha, mixture=None):
    xi = mixture if mixture is not None else mix(components, beta)
    q = lower_quantile(xi, alpha)
    at_q = prob_eq(xi, q)
    # exact zero test: masses are sums of input masses
    if at_q == 0.0:
        frac = 0.0
    else:
        frac = min(max((alpha - prob_lt(xi, q)) / at_q, 0.0), 1.0)
    alphas = [min(prob_lt(x, q) + prob_eq(x, q) * frac, 1.0) for x in components]
    return xi, q, alphas


def lemma_alphas(
    components: Sequence[DiscreteDistribution], beta, alpha: float, *, mixture=None
) -> list[float]:
    """Per-component levels alpha_j for all j, zero-weight ones included."""
    beta = as_weights(beta)
    _check_lengths(components, beta)
    alpha = check_level(alpha, open_low=True, open_high=True)
    return _construct(components, beta, alpha, mixture)[2]


def lemma_decomposition(
    components: Sequence[DiscreteDistribution], beta, alpha: float, *, mixture=None
) -> LemmaReport:
    beta = as_weights(beta)
    _check_lengths(components, beta)
    alpha = check_level(alpha, open_low=True, open_high=True)
    xi, q, alphas = _construct(components, beta, alpha, mixture)
    active = beta.support
    level_sum = math.fsum(beta[j] * alphas[j] for j in active)
    lhs = es_value(xi, alpha)
    # alpha_j = 0 terms vanish whatever ES_0(X_j) is
    rhs = math.fsum(
        alphas[j] * beta[j] / alpha * es_value(components[j], alphas[j])
        for j in active
        if alphas[j] > 0.0
    )
    return LemmaReport(
        alpha=alpha,
        q_alpha=q,
        alphas=[alphas[j] if beta[j] > 0.0 else None for j in range(len(beta))],
        weighted_level_sum=level_sum,
        lhs=lhs,
        rhs=rhs,
        decomposition_residual=lhs - rhs,
    )


def concavity_gap(
    components: Sequence[DiscreteDistribution], beta, alpha: float, *, mixture=None
) -> GapReport:
    """ES of the mixture minus the beta-weighted ES of the components."""
    beta = as_weights(beta)
    _check_lengths(components, beta)
    alpha = check_level(alpha)
    xi = mixture if mixture is not None else mix(components, beta)
    active = beta.support
    lhs = es_value(xi, alpha)
    rhs = math.fsum(beta[j] * es_value(components[j], alpha) for j in active)
    if alpha == 1.0:
        equal = True
    elif alpha == 0.0:
        equal = len({essinf(components[j]) for j in active}) == 1
    else:
        alphas = _construct(components, beta, alpha, xi)[2]
        # relative: at tiny levels an absolute tolerance would call everything equal
        equal = all(abs(alphas[j] - alpha) <= LEVEL_TOL * alpha for j in active)
    return GapReport(alpha=alpha, lhs=lhs, rhs=rhs, gap=lhs - rhs, equality_expected=equal)
