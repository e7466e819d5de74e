"""ES through the CVaR minimization problem.

    ES_alpha(X) = min_c  c + E[(-X - c)^+] / alpha

The objective is convex and piecewise linear in ``c`` with kinks at the
negated atom values, so the minimum over finite support is found by
evaluating every kink. Kept deliberately naive: it is a cross-check for
:mod:`riskmix.es`, not a production path.
"""

from __future__ import annotations

import math

from .distribution import DiscreteDistribution, check_level


def objective(d: DiscreteDistribution, alpha: float, c: float) -> float:
    shortfall = math.fsum(m * max(-v - c, 0.0) for v, m in zip(d.values, d.masses))
    return c + shortfall / alpha


def es_minimization(d: DiscreteDistribution, alpha: float) -> tuple[float, float]:
    """Return ``(min, argmin)``; ties go to the smallest candidate ``c``."""
    alpha = check_level(alpha, open_low=True)
    best_c = None
    best = math.inf
    for c in sorted(0.0 - v for v in d.values):
        f = objective(d, alpha, c)
        if f < best:
            best, best_c = f, c
    return best, best_c
