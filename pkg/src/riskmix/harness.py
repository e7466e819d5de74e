"""Randomized and exhaustive verification of every identity and inequality.

Instances are drawn with grid-rational masses and weights so probability
bookkeeping is exact up to rounding, and levels are concentrated on the
cumulative-mass breakpoints of the mixture, where all the discontinuity
handling lives. Results are tallied per check; a failure is report
content, never an exception.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, field

from .coupling import (
    SizeCapExceeded,
    comonotone_coupling,
    convexity_gap,
    diversification_gap,
    marginal,
    prepare,
    product_coupling,
)
from .distribution import (
    DiscreteDistribution,
    Weights,
    cdf,
    lower_quantile,
    make_discrete,
    mix,
    prob_lt,
    upper_quantile,
)
from .es import es_integral, es_tail, es_value
from .lemma import LEVEL_TOL, REL_TOL, concavity_gap, lemma_decomposition, scale_of
from .oracle import es_minimization, objective
from .spectral import SpectralMeasure, spectral_concavity_gap, spectral_value

GROUPS = ("es", "quantile", "lemma", "concavity", "coupling", "spectral")

EXHAUSTIVE_VALUES = (-2.0, -1.0, 0.0, 1.0, 2.0)
EXHAUSTIVE_UNITS = 4
EXHAUSTIVE_BETAS = ((0.25, 0.75), (0.5, 0.5), (0.75, 0.25))


@dataclass(frozen=True)
class GenConfig:
    seed: int = 20240917
    n_components: tuple[int, int] = (1, 3)
    atoms_per_component: tuple[int, int] = (1, 12)
    value_range: tuple[float, float] = (-10.0, 10.0)
    # atom values are drawn from value_steps + 1 evenly spaced grid points
    value_steps: int = 20
    mass_grid: int = 24
    beta_grid: int = 12
    # "all-breakpoints" (breakpoints and midpoints), "breakpoints", or explicit levels
    alpha_grid: str | tuple[float, ...] = "all-breakpoints"
    instance_count: int = 10_000
    zero_weight_prob: float = 0.1
    identical_prob: float = 0.1
    max_spectral_points: int = 5
    exhaustive: bool = True

    def __post_init__(self):
        for name in ("n_components", "atoms_per_component"):
            lo, hi = getattr(self, name)
            if not 1 <= lo <= hi:
                raise ValueError(f"{name} must be a nonempty range of positive integers")
        if not self.value_range[0] < self.value_range[1]:
            raise ValueError("value_range needs lo < hi")
        if self.mass_grid < 1 or self.value_steps < 1:
            raise ValueError("mass_grid and value_steps must be >= 1")
        if self.atoms_per_component[0] > min(self.mass_grid, self.value_steps + 1):
            raise ValueError("mass_grid and value grid too coarse for the minimum atom count")
        if self.beta_grid < self.n_components[1]:
            raise ValueError("beta_grid must be at least the maximum component count")
        if self.instance_count < 0:
            raise ValueError("instance_count must be nonnegative")
        if isinstance(self.alpha_grid, str):
            if self.alpha_grid not in ("all-breakpoints", "breakpoints"):
                raise ValueError(f"unknown alpha_grid mode {self.alpha_grid!r}")
        else:
            object.__setattr__(self, "alpha_grid", tuple(float(a) for a in self.alpha_grid))


@dataclass(frozen=True)
class Instance:
    index: int
    components: list[DiscreteDistribution]
    beta: Weights
    alphas: list[float]
    nu: SpectralMeasure

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "components": [d.to_json() for d in self.components],
            "beta": list(self.beta),
            "alphas": self.alphas,
            "nu": self.nu.to_json(),
        }


def _composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """Uniformly random positive integer composition of ``total``."""
    cuts = sorted(rng.sample(range(1, total), parts - 1))
    return [b - a for a, b in zip([0, *cuts], [*cuts, total])]


def level_grid(d: DiscreteDistribution, mode="all-breakpoints") -> list[float]:
    """Levels 0, 1, the breakpoints of ``d`` and, by default, their midpoints."""
    if not isinstance(mode, str):
        return sorted(set(mode))
    levels = {0.0, 1.0, *d.cumulative}
    if mode == "all-breakpoints":
        edges = [0.0, *d.cumulative]
        levels.update((a + b) / 2 for a, b in zip(edges, edges[1:]))
    return sorted(levels)


def _random_nu(rng: random.Random, levels: Sequence[float], max_points: int) -> SpectralMeasure:
    k = rng.randint(1, min(max_points, len(levels)))
    points = rng.sample(list(levels), k)
    units = _composition(rng, 12 * k, k)
    return SpectralMeasure(tuple((a, u / (12 * k)) for a, u in zip(points, units)))


def gen_instance(config: GenConfig, index: int) -> Instance:
    """Deterministic function of ``(config.seed, index)``."""
    rng = random.Random(f"riskmix:{config.seed}:{index}")
    n = rng.randint(*config.n_components)
    lo, hi = config.value_range
    steps = config.value_steps
    grid = [lo + (hi - lo) * i / steps for i in range(steps + 1)]
    max_atoms = min(config.atoms_per_component[1], config.mass_grid, steps + 1)
    components = []
    for _ in range(n):
        k = rng.randint(config.atoms_per_component[0], max_atoms)
        values = rng.sample(grid, k)
        units = _composition(rng, config.mass_grid, k)
        components.append(make_discrete((v, u / config.mass_grid) for v, u in zip(values, units)))
    if n > 1 and rng.random() < config.identical_prob:
        components = [components[0]] * n

    zeros = 0
    if n > 1 and rng.random() < config.zero_weight_prob:
        zeros = rng.randint(1, n - 1)
    units = _composition(rng, config.beta_grid, n - zeros)
    slots = sorted(rng.sample(range(n), n - zeros))
    entries = [0.0] * n
    for j, u in zip(slots, units):
        entries[j] = u / config.beta_grid
    beta = Weights(tuple(entries))

    alphas = level_grid(mix(components, beta), config.alpha_grid)
    nu = _random_nu(rng, alphas, config.max_spectral_points)
    return Instance(index, components, beta, alphas, nu)


def exhaustive_instances() -> Iterable[Instance]:
    """All pairs of quarter-mass laws on {-2..2} with beta on the quarter grid."""
    laws = []
    for units in itertools.combinations_with_replacement(EXHAUSTIVE_VALUES, EXHAUSTIVE_UNITS):
        laws.append(make_discrete((v, 1 / EXHAUSTIVE_UNITS) for v in units))
    index = 0
    for x, y in itertools.combinations_with_replacement(laws, 2):
        for b in EXHAUSTIVE_BETAS:
            beta = Weights(b)
            alphas = level_grid(mix([x, y], beta))
            inner = [a for a in alphas if 0.0 < a < 1.0] or [1.0]
            nu = SpectralMeasure(tuple((a, 1 / len(inner)) for a in inner))
            yield Instance(index, [x, y], beta, alphas, nu)
            index += 1


@dataclass
class CheckTally:
    passed: int = 0
    failed: int = 0
    worst_violation: float = float("-inf")
    worst: dict | None = None

    def merge(self, other: CheckTally) -> None:
        self.passed += other.passed
        self.failed += other.failed
        if other.worst_violation > self.worst_violation:
            self.worst_violation = other.worst_violation
            self.worst = other.worst

    def to_json(self) -> dict:
        return {"passed": self.passed, "failed": self.failed, "worst": self.worst}


class _Recorder:
    """Collects tallies for one section; contexts are built lazily."""

    def __init__(self, section: str):
        self.section = section
        self.tallies: dict[str, CheckTally] = {}
        self.failures: list[dict] = []
        self.instance: Instance | None = None

    def __call__(self, check: str, violation: float, tol: float, context) -> None:
        tally = self.tallies.get(check)
        if tally is None:
            tally = self.tallies[check] = CheckTally()
        ok = violation <= tol
        if ok:
            tally.passed += 1
        else:
            tally.failed += 1
        if not ok or violation > tally.worst_violation:
            entry = {
                "check": check,
                "section": self.section,
                "violation": violation,
                "tolerance": tol,
                **context(),
                "instance": self.instance.to_json(),
            }
            if violation > tally.worst_violation:
                tally.worst_violation = violation
                tally.worst = entry
            if not ok:
                self.failures.append(entry)


def _check_es(rec, inst: Instance) -> None:
    dists = [(f"component[{j}]", d) for j, d in enumerate(inst.components)]
    dists.append(("mixture", mix(inst.components, inst.beta)))
    for label, d in dists:
        levels = sorted(set(level_grid(d)) | set(inst.alphas))
        previous = None
        for a in levels:
            if a == 0.0:
                value = es_value(d, 0.0)
                es0 = value
            else:
                value = es_tail(d, a)
                integral = es_integral(d, a)
                s = 1.0 + abs(value)
                rec("es_representations", abs(integral - value) / s, REL_TOL,
                    lambda: {"distribution": label, "alpha": a, "tail": value, "integral": integral})
                if label != "mixture":
                    best, c = es_minimization(d, a)
                    rec("es_oracle", abs(best - value) / s, REL_TOL,
                        lambda: {"distribution": label, "alpha": a, "tail": value, "minimization": best})
                    at_quantile = objective(d, a, -lower_quantile(d, a))
                    rec("es_oracle_argmin", (best - at_quantile) / s, 0.0,
                        lambda: {"distribution": label, "alpha": a, "argmin": c})
            if previous is not None:
                # ES is nonincreasing in the level and bounded by ES_0
                rec("es_monotone", (value - previous) / (1.0 + abs(previous)), REL_TOL,
                    lambda: {"distribution": label, "alpha": a, "es": value, "previous": previous})
                rec("es_bounded_by_level0", (value - es0) / (1.0 + abs(es0)), REL_TOL,
                    lambda: {"distribution": label, "alpha": a, "es": value, "es0": es0})
            previous = value


def _check_quantiles(rec, inst: Instance) -> None:
    for j, d in enumerate(inst.components):
        breaks = set(d.cumulative)
        for a in level_grid(d):
            if not 0.0 < a < 1.0:
                continue
            lo, up = lower_quantile(d, a), upper_quantile(d, a)
            rec("quantile_order", lo - up, 0.0, lambda: {"component": j, "alpha": a, "lower": lo, "upper": up})
            if a not in breaks:
                rec("quantile_agree_off_breakpoints", abs(lo - up), 0.0,
                    lambda: {"component": j, "alpha": a, "lower": lo, "upper": up})


def _check_lemma(rec, inst: Instance, xi: DiscreteDistribution) -> None:
    comps, beta = inst.components, inst.beta
    for a in inst.alphas:
        if not 0.0 < a < 1.0:
            continue
        rep = lemma_decomposition(comps, beta, a, mixture=xi)
        rec("lemma_level_sum", abs(rep.weighted_level_sum - a), LEVEL_TOL,
            lambda: {"alpha": a, "weighted_level_sum": rep.weighted_level_sum})
        rec("lemma_decomposition", abs(rep.decomposition_residual) / (1.0 + abs(rep.lhs)), REL_TOL,
            lambda: {"alpha": a, "report": rep.to_json()})
        q = rep.q_alpha
        for j in beta.support:
            aj = rep.alphas[j]
            low, high = prob_lt(comps[j], q), cdf(comps[j], q)
            rec("lemma_bracketing", max(low - aj, aj - high), LEVEL_TOL,
                lambda: {"alpha": a, "component": j, "alpha_j": aj, "bracket": [low, high]})
            # above alpha_j the component's quantile never drops below q
            edges = [0.0, *comps[j].cumulative]
            probes = [g for g in comps[j].cumulative if g > aj + LEVEL_TOL]
            probes += [(u + v) / 2 for u, v in zip(edges, edges[1:]) if (u + v) / 2 > aj + LEVEL_TOL]
            for g in probes:
                qg = lower_quantile(comps[j], g)
                rec("tail_location", q - qg, 0.0,
                    lambda: {"alpha": a, "component": j, "gamma": g, "quantile": qg, "q_alpha": q})


def _concavity(inst, xi, a):
    return concavity_gap(inst.components, inst.beta, a, mixture=xi)


def _check_concavity(rec, inst: Instance, xi: DiscreteDistribution) -> None:
    for a in inst.alphas:
        rep = _concavity(inst, xi, a)
        tol = rep.tolerance
        s = tol / REL_TOL
        rec("concavity", -rep.gap / s, REL_TOL, lambda: {"alpha": a, "report": rep.to_json()})
        if rep.equality_expected:
            rec("concavity_equality", abs(rep.gap) / s, REL_TOL, lambda: {"alpha": a, "report": rep.to_json()})


def _check_coupling(rec, inst: Instance, xi: DiscreteDistribution) -> None:
    comps, beta = inst.components, inst.beta
    joints = [("comonotone", comonotone_coupling(comps))]
    try:
        joints.append(("product", product_coupling(comps)))
    except SizeCapExceeded:
        pass
    for name, joint in joints:
        for j, d in enumerate(comps):
            m = marginal(joint, j)
            same_support = m.values == d.values
            err = max((abs(p - r) for p, r in zip(m.masses, d.masses)), default=0.0) if same_support else 1.0
            rec("coupling_marginals", err, LEVEL_TOL, lambda: {"coupling": name, "component": j})
        pr = prepare(joint, beta)
        for a in inst.alphas:
            conv = convexity_gap(joint, beta, a, prepared=pr)
            div = diversification_gap(joint, beta, a, prepared=pr)
            conc = _concavity(inst, xi, a)
            s = scale_of(conv.lhs, conv.rhs, div.lhs, div.rhs, conc.lhs, conc.rhs)
            ctx = lambda: {"coupling": name, "alpha": a, "convexity": conv.to_json(),
                           "diversification": div.to_json(), "concavity": conc.to_json()}
            rec("convexity", -conv.gap / s, REL_TOL, ctx)
            if name == "comonotone":
                rec("comonotone_additivity", abs(conv.gap) / s, REL_TOL, ctx)
            rec("diversification", -div.gap / s, REL_TOL, ctx)
            rec("diversification_identity", abs(div.gap - conv.gap - conc.gap) / s, 2 * REL_TOL, ctx)


def _check_spectral(rec, inst: Instance, xi: DiscreteDistribution) -> None:
    rep = spectral_concavity_gap(inst.components, inst.beta, inst.nu, mixture=xi)
    s = rep.tolerance / REL_TOL
    rec("spectral_concavity", -rep.gap / s, REL_TOL, lambda: {"report": rep.to_json()})
    for a in inst.nu.levels:
        v, e = spectral_value(xi, SpectralMeasure.point_mass(a)), es_value(xi, a)
        rec("spectral_point_mass", abs(v - e), 0.0, lambda: {"alpha": a, "spectral": v, "es": e})


def check_instance(rec: _Recorder, inst: Instance, groups: Sequence[str] = GROUPS) -> None:
    rec.instance = inst
    xi = mix(inst.components, inst.beta)
    if "es" in groups:
        _check_es(rec, inst)
    if "quantile" in groups:
        _check_quantiles(rec, inst)
    if "lemma" in groups:
        _check_lemma(rec, inst, xi)
    if "concavity" in groups:
        _check_concavity(rec, inst, xi)
    if "coupling" in groups:
        _check_coupling(rec, inst, xi)
    if "spectral" in groups:
        _check_spectral(rec, inst, xi)


@dataclass
class SuiteReport:
    seed: int
    config: dict
    sections: dict[str, dict] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def n_failures(self) -> int:
        return len(self.failures)

    @property
    def passed(self) -> bool:
        return not self.failures

    def counts(self, check: str) -> tuple[int, int]:
        """(passed, failed) for ``check`` summed over sections."""
        p = f = 0
        for sec in self.sections.values():
            t = sec["checks"].get(check)
            if t is not None:
                p, f = p + t.passed, f + t.failed
        return p, f

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "seed": self.seed,
            "config": self.config,
            "passed": self.passed,
            "n_failures": self.n_failures,
            "sections": {
                name: {
                    "instances": sec["instances"],
                    "checks": {k: t.to_json() for k, t in sorted(sec["checks"].items())},
                }
                for name, sec in self.sections.items()
            },
            "failures": self.failures,
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out

    def dumps(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_json(include_timing), indent=1) + "\n"


def _run_section(name: str, instances: Iterable[Instance], groups) -> tuple[dict, list[dict]]:
    rec = _Recorder(name)
    count = 0
    for inst in instances:
        check_instance(rec, inst, groups)
        count += 1
    return {"instances": count, "checks": rec.tallies}, rec.failures


def run_suite(config: GenConfig | None = None, groups: Sequence[str] = GROUPS) -> SuiteReport:
    """Run every selected check group on the randomized and exhaustive instances."""
    config = config or GenConfig()
    unknown = set(groups) - set(GROUPS)
    if unknown:
        raise ValueError(f"unknown check groups: {sorted(unknown)}")
    start = time.perf_counter()
    cfg = asdict(config)
    cfg["groups"] = list(groups)
    report = SuiteReport(seed=config.seed, config=cfg)
    sections = [("random", (gen_instance(config, i) for i in range(config.instance_count)))]
    if config.exhaustive:
        sections.append(("exhaustive", exhaustive_instances()))
    for name, instances in sections:
        section, failures = _run_section(name, instances, groups)
        report.sections[name] = section
        report.failures.extend(failures)
    report.wall_time = time.perf_counter() - start
    return report
