"""Joint laws for several risk positions on a finite scenario set.

A mixture only needs the marginal laws, but a convex combination
sum_j beta_j X_j needs a joint law. Two couplings are provided: the
comonotone one (all positions driven by the same uniform through their
quantile functions) and the independent product.
"""

from __future__ import annotations

import itertools
import math
import os
from collections.abc import Sequence
from dataclasses import dataclass

from .distribution import (
    MASS_TOL,
    DiscreteDistribution,
    as_weights,
    check_level,
    lower_quantile,
    make_discrete,
    mix,
)
from .errors import (
    EmptyInput,
    IndexOutOfRange,
    LengthMismatch,
    MassSumOutOfTolerance,
    NegativeMass,
    RiskMixError,
    SizeCapExceeded,
)
from .es import es_value
from .lemma import GapReport

DEFAULT_SIZE_CAP = 10**6
# cumulative levels closer than this are treated as one breakpoint
BREAKPOINT_TOL = 1e-12


def size_cap() -> int:
    raw = os.environ.get("RISKMIX_SIZE_CAP")
    if raw is None:
        return DEFAULT_SIZE_CAP
    try:
        return int(raw)
    except ValueError:
        raise RiskMixError(f"RISKMIX_SIZE_CAP must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class JointScenarios:
    """Scenario probabilities and one row of position values per scenario.

    Rows with identical value vectors are kept apart so scenario indices
    stay stable; only derived one-dimensional laws merge duplicates.
    """

    probs: tuple[float, ...]
    values: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        probs = [float(p) for p in self.probs]
        values = tuple(tuple(float(v) for v in row) for row in self.values)
        if not probs:
            raise EmptyInput("joint law needs at least one scenario")
        if len(values) != len(probs):
            raise LengthMismatch(f"{len(probs)} probabilities but {len(values)} rows")
        width = len(values[0])
        if width == 0:
            raise EmptyInput("joint law needs at least one risk position")
        if any(len(row) != width for row in values):
            raise LengthMismatch("all scenario rows must have the same width")
        for p in probs:
            if not p > 0.0:
                raise NegativeMass(f"scenario probabilities must be positive, got {p!r}")
        total = math.fsum(probs)
        if abs(total - 1.0) > MASS_TOL:
            raise MassSumOutOfTolerance(f"scenario probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probs", tuple(p / total for p in probs))
        object.__setattr__(self, "values", values)

    @property
    def n_positions(self) -> int:
        return len(self.values[0])

    def scaled(self, lam: float) -> JointScenarios:
        return JointScenarios(self.probs, tuple(tuple(lam * v for v in row) for row in self.values))

    def to_json(self) -> dict:
        return {"probs": list(self.probs), "values": [list(row) for row in self.values]}


def marginal(joint: JointScenarios, j: int) -> DiscreteDistribution:
    if not 0 <= j < joint.n_positions:
        raise IndexOutOfRange(f"position {j} out of range for {joint.n_positions} columns")
    return make_discrete((row[j], p) for row, p in zip(joint.values, joint.probs))


def marginals(joint: JointScenarios) -> list[DiscreteDistribution]:
    return [marginal(joint, j) for j in range(joint.n_positions)]


def portfolio(joint: JointScenarios, beta) -> DiscreteDistribution:
    """Law of sum_j beta_j X_j under the joint law."""
    beta = as_weights(beta)
    if len(beta) != joint.n_positions:
        raise LengthMismatch(f"{len(beta)} weights for {joint.n_positions} positions")
    return make_discrete(
        (math.fsum(b * v for b, v in zip(beta, row)), p) for row, p in zip(joint.values, joint.probs)
    )


def comonotone_coupling(components: Sequence[DiscreteDistribution]) -> JointScenarios:
    """Quantile-aligned coupling: one scenario per refined segment of (0, 1]."""
    if not components:
        raise EmptyInput("coupling needs at least one component")
    levels = sorted({c for d in components for c in d.cumulative})
    cuts: list[float] = []
    for c in levels:
        # near-equal levels from different summation orders collapse to the
        # smaller one, where every component still reads its own atom
        if cuts and c - cuts[-1] <= BREAKPOINT_TOL:
            continue
        cuts.append(c)
    cuts[-1] = 1.0
    probs, rows = [], []
    lo = 0.0
    for hi in cuts:
        probs.append(hi - lo)
        rows.append(tuple(lower_quantile(d, hi) for d in components))
        lo = hi
    return JointScenarios(tuple(probs), tuple(rows))


def product_coupling(components: Sequence[DiscreteDistribution], cap: int | None = None) -> JointScenarios:
    """Independent coupling: Cartesian product of the atoms."""
    if not components:
        raise EmptyInput("coupling needs at least one component")
    cap = size_cap() if cap is None else cap
    size = math.prod(len(d) for d in components)
    if size > cap:
        raise SizeCapExceeded(f"product coupling has {size} scenarios, cap is {cap}")
    probs, rows = [], []
    for combo in itertools.product(*(d.atoms for d in components)):
        rows.append(tuple(v for v, _ in combo))
        probs.append(math.prod(m for _, m in combo))
    return JointScenarios(tuple(probs), tuple(rows))


def is_comonotone(joint: JointScenarios) -> bool:
    """True when the scenario rows form a chain in the coordinatewise order."""
    rows = sorted(joint.values)
    return all(all(a <= b for a, b in zip(r, s)) for r, s in zip(rows, rows[1:]))


@dataclass(frozen=True)
class Prepared:
    """Level-independent pieces shared by the gap functions for one (joint, beta)."""

    beta: object
    marginals: list
    portfolio: DiscreteDistribution
    mixture: DiscreteDistribution
    comonotone: bool


def prepare(joint: JointScenarios, beta) -> Prepared:
    beta = as_weights(beta)
    if len(beta) != joint.n_positions:
        raise LengthMismatch(f"{len(beta)} weights for {joint.n_positions} positions")
    margs = marginals(joint)
    return Prepared(beta, margs, portfolio(joint, beta), mix(margs, beta), is_comonotone(joint))


def convexity_gap(joint: JointScenarios, beta, alpha: float, *, prepared: Prepared | None = None) -> GapReport:
    """sum_j beta_j ES(X_j) minus ES(sum_j beta_j X_j); zero for comonotone laws."""
    alpha = check_level(alpha)
    pr = prepared or prepare(joint, beta)
    beta = pr.beta
    lhs = math.fsum(beta[j] * es_value(pr.marginals[j], alpha) for j in beta.support)
    rhs = es_value(pr.portfolio, alpha)
    # a single active position is its own portfolio
    equal = pr.comonotone or len(beta.support) == 1
    return GapReport(alpha=alpha, lhs=lhs, rhs=rhs, gap=lhs - rhs, equality_expected=equal)


def diversification_gap(joint: JointScenarios, beta, alpha: float, *, prepared: Prepared | None = None) -> GapReport:
    """ES of the mixture of the marginals minus ES of the portfolio."""
    alpha = check_level(alpha)
    pr = prepared or prepare(joint, beta)
    lhs = es_value(pr.mixture, alpha)
    rhs = es_value(pr.portfolio, alpha)
    equal = len(pr.beta.support) == 1
    return GapReport(alpha=alpha, lhs=lhs, rhs=rhs, gap=lhs - rhs, equality_expected=equal)
