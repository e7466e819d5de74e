"""Finitely supported distributions on the real line.

A risk position is identified with its law: a :class:`DiscreteDistribution`
holding strictly increasing atom values and strictly positive masses. All
quantities used elsewhere in the package (cdf, strict cdf, lower and upper
quantiles, moments, mixtures) are exact step-function evaluations on that
representation.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .errors import (
    EmptyInput,
    LengthMismatch,
    LevelOutOfDomain,
    MassSumOutOfTolerance,
    NegativeMass,
    RiskMixError,
)

# input mass sums are accepted within this distance of 1, then renormalized
MASS_TOL = 1e-9


def running_sum(xs: Iterable[float]) -> list[float]:
    """Prefix sums with Neumaier compensation."""
    out = []
    s = 0.0
    c = 0.0
    for x in xs:
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        out.append(s + c)
    return out


def check_level(alpha: float, *, open_low: bool = False, open_high: bool = False) -> float:
    """Validate a probability level and return it as a float.

    The default domain is the closed interval [0, 1]; ``open_low`` and
    ``open_high`` exclude the corresponding endpoint.
    """
    a = float(alpha)
    lo_ok = a > 0.0 if open_low else a >= 0.0
    hi_ok = a < 1.0 if open_high else a <= 1.0
    if not (lo_ok and hi_ok):
        domain = ("(" if open_low else "[") + "0,1" + (")" if open_high else "]")
        raise LevelOutOfDomain(f"level out of {domain}: {alpha!r}")
    return a


def _normalize(masses: Sequence[float], what: str) -> tuple[float, ...]:
    for m in masses:
        if not math.isfinite(m):
            raise RiskMixError(f"non-finite {what}: {m!r}")
        if m <= 0.0:
            raise NegativeMass(f"{what} must be positive, got {m!r}")
    total = math.fsum(masses)
    if abs(total - 1.0) > MASS_TOL:
        raise MassSumOutOfTolerance(f"{what}es sum to {total!r}, not 1 within {MASS_TOL}")
    return tuple(m / total for m in masses)


@dataclass(frozen=True)
class DiscreteDistribution:
    """Law of a risk position with finitely many atoms.

    ``values`` must be strictly increasing and ``masses`` strictly positive
    with unit sum (renormalized on construction). Use :func:`make_discrete`
    to build one from unsorted pairs with duplicates.
    """

    values: tuple[float, ...]
    masses: tuple[float, ...]
    # cumulative[k] = P(X <= values[k]); last entry pinned to exactly 1
    cumulative: tuple[float, ...] = field(init=False, repr=False, compare=False)
    # partial[k] = E[X 1{X <= values[k]}]
    partial: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        values = tuple(float(v) + 0.0 for v in self.values)
        if not values:
            raise EmptyInput("distribution needs at least one atom")
        if len(values) != len(self.masses):
            raise LengthMismatch("values and masses differ in length")
        if not all(math.isfinite(v) for v in values):
            raise RiskMixError("atom values must be finite")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise RiskMixError("atom values must be strictly increasing")
        masses = _normalize([float(m) for m in self.masses], "mass")
        cum = running_sum(masses)
        cum[-1] = 1.0
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "cumulative", tuple(cum))
        object.__setattr__(self, "partial", tuple(running_sum(v * m for v, m in zip(values, masses))))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.values, self.masses))

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Cumulative-mass levels where the quantile functions jump."""
        return self.cumulative

    def scaled(self, lam: float) -> DiscreteDistribution:
        """Law of ``lam * X`` for ``lam >= 0``."""
        if lam < 0:
            raise RiskMixError("scale factor must be nonnegative")
        return make_discrete((lam * v, m) for v, m in self.atoms)

    def shifted(self, c: float) -> DiscreteDistribution:
        """Law of ``X + c``."""
        return make_discrete((v + c, m) for v, m in self.atoms)

    def to_json(self) -> dict:
        return {"atoms": [{"x": v, "p": m} for v, m in self.atoms]}


def make_discrete(pairs: Iterable[tuple[float, float]]) -> DiscreteDistribution:
    """Build a distribution from ``(value, mass)`` pairs.

    Pairs sharing a value (exact float equality) are merged by summing their
    masses; the result is sorted by value.

    >>> make_discrete([(0, 0.5), (0, 0.1), (5, 0.4)]).atoms
    [(0.0, 0.6), (5.0, 0.4)]
    """
    pairs = [(float(v), float(m)) for v, m in pairs]
    if not pairs:
        raise EmptyInput("no atoms given")
    for _, m in pairs:
        if not m > 0.0:
            raise NegativeMass(f"mass must be positive, got {m!r}")
    pairs.sort(key=lambda vm: vm[0])
    values: list[float] = []
    groups: list[list[float]] = []
    for v, m in pairs:
        if values and values[-1] == v:
            groups[-1].append(m)
        else:
            values.append(v)
            groups.append([m])
    return DiscreteDistribution(tuple(values), tuple(math.fsum(g) for g in groups))


def point_mass(c: float) -> DiscreteDistribution:
    return DiscreteDistribution((float(c),), (1.0,))


def from_samples(samples: Iterable[float]) -> DiscreteDistribution:
    """Empirical distribution: each distinct value gets multiplicity / n."""
    samples = [float(x) for x in samples]
    if not samples:
        raise EmptyInput("no samples given")
    n = len(samples)
    counts: dict[float, int] = {}
    for x in samples:
        x += 0.0
        counts[x] = counts.get(x, 0) + 1
    return make_discrete((v, k / n) for v, k in counts.items())


def cdf(d: DiscreteDistribution, x: float) -> float:
    """P(X <= x)."""
    k = bisect_right(d.values, x)
    return d.cumulative[k - 1] if k else 0.0


def prob_lt(d: DiscreteDistribution, x: float) -> float:
    """P(X < x)."""
    k = bisect_left(d.values, x)
    return d.cumulative[k - 1] if k else 0.0


def prob_eq(d: DiscreteDistribution, x: float) -> float:
    """Mass of the atom at ``x`` (zero off the support)."""
    k = bisect_left(d.values, x)
    if k < len(d.values) and d.values[k] == x:
        return d.masses[k]
    return 0.0


def tail_expectation(d: DiscreteDistribution, x: float) -> float:
    """E[X 1{X < x}]."""
    k = bisect_left(d.values, x)
    return d.partial[k - 1] if k else 0.0


def lower_quantile_index(d: DiscreteDistribution, alpha: float) -> int:
    return bisect_left(d.cumulative, alpha)


def lower_quantile(d: DiscreteDistribution, alpha: float) -> float:
    """inf{x : F(x) >= alpha} for alpha in (0, 1]."""
    alpha = check_level(alpha, open_low=True)
    return d.values[lower_quantile_index(d, alpha)]


def upper_quantile(d: DiscreteDistribution, alpha: float) -> float:
    """inf{x : F(x) > alpha} for alpha in [0, 1)."""
    alpha = check_level(alpha, open_high=True)
    return d.values[bisect_right(d.cumulative, alpha)]


def expectation(d: DiscreteDistribution) -> float:
    return math.fsum(v * m for v, m in zip(d.values, d.masses))


def essinf(d: DiscreteDistribution) -> float:
    return d.values[0]


@dataclass(frozen=True)
class Weights:
    """A point of the standard simplex.

    Entries must be nonnegative and sum to 1 within ``MASS_TOL``; they are
    renormalized so the stored sum is 1 up to rounding.
    """

    entries: tuple[float, ...]

    def __post_init__(self):
        entries = [float(b) for b in self.entries]
        if not entries:
            raise EmptyInput("weights need at least one entry")
        for b in entries:
            if not math.isfinite(b):
                raise RiskMixError(f"non-finite weight: {b!r}")
            if b < 0.0:
                raise NegativeMass(f"weights must be nonnegative, got {b!r}")
        total = math.fsum(entries)
        if abs(total - 1.0) > MASS_TOL:
            raise MassSumOutOfTolerance(f"weights sum to {total!r}, not 1 within {MASS_TOL}")
        object.__setattr__(self, "entries", tuple(b / total for b in entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, j: int) -> float:
        return self.entries[j]

    @property
    def support(self) -> list[int]:
        """Indices with strictly positive weight."""
        return [j for j, b in enumerate(self.entries) if b > 0.0]

    @classmethod
    def unit(cls, n: int, j: int) -> Weights:
        return cls(tuple(1.0 if i == j else 0.0 for i in range(n)))

    @classmethod
    def uniform(cls, n: int) -> Weights:
        return cls((1.0 / n,) * n)


def as_weights(beta) -> Weights:
    return beta if isinstance(beta, Weights) else Weights(tuple(beta))


def mix(components: Sequence[DiscreteDistribution], beta) -> DiscreteDistribution:
    """Mixture with cdf sum_j beta_j F_j; zero-weight components are dropped."""
    beta = as_weights(beta)
    if not components:
        raise EmptyInput("mixture needs at least one component")
    if len(components) != len(beta):
        raise LengthMismatch(f"{len(components)} components but {len(beta)} weights")
    pairs = [(v, b * m) for d, b in zip(components, beta) if b > 0.0 for v, m in d.atoms]
    return make_discrete(pairs)
