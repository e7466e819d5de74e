"""Spectral risk measures with finitely supported level measures.

rho_nu(X) = sum_k w_k ES_{a_k}(X) for nu = sum_k w_k delta_{a_k} on [0, 1].
Points at level 0 are allowed since ES_0 is finite on finite support.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .distribution import MASS_TOL, DiscreteDistribution, as_weights, check_level, mix
from .errors import EmptyInput, MassSumOutOfTolerance, NegativeMass
from .es import es_value
from .lemma import GapReport, _check_lengths, concavity_gap


@dataclass(frozen=True)
class SpectralMeasure:
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        merged: dict[float, list[float]] = {}
        for a, w in self.points:
            a = check_level(a) + 0.0
            w = float(w)
            if not w > 0.0:
                raise NegativeMass(f"spectral weights must be positive, got {w!r}")
            merged.setdefault(a, []).append(w)
        if not merged:
            raise EmptyInput("spectral measure needs at least one point")
        weights = {a: math.fsum(ws) for a, ws in merged.items()}
        total = math.fsum(weights.values())
        if abs(total - 1.0) > MASS_TOL:
            raise MassSumOutOfTolerance(f"spectral weights sum to {total!r}, not 1")
        points = tuple((a, weights[a] / total) for a in sorted(weights))
        object.__setattr__(self, "points", points)

    @classmethod
    def point_mass(cls, alpha: float) -> SpectralMeasure:
        return cls(((alpha, 1.0),))

    @property
    def levels(self) -> list[float]:
        return [a for a, _ in self.points]

    def to_json(self) -> dict:
        return {"points": [{"alpha": a, "weight": w} for a, w in self.points]}


def make_spectral(points: Iterable[tuple[float, float]]) -> SpectralMeasure:
    return SpectralMeasure(tuple(points))


def spectral_value(d: DiscreteDistribution, nu: SpectralMeasure) -> float:
    return math.fsum(w * es_value(d, a) for a, w in nu.points)


def spectral_concavity_gap(
    components: Sequence[DiscreteDistribution], beta, nu: SpectralMeasure, *, mixture=None
) -> GapReport:
    beta = as_weights(beta)
    _check_lengths(components, beta)
    xi = mixture if mixture is not None else mix(components, beta)
    lhs = spectral_value(xi, nu)
    rhs = math.fsum(beta[j] * spectral_value(components[j], nu) for j in beta.support)
    equal = all(concavity_gap(components, beta, a, mixture=xi).equality_expected for a in nu.levels)
    return GapReport(alpha=None, lhs=lhs, rhs=rhs, gap=lhs - rhs, equality_expected=equal)
