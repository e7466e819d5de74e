from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from riskmix.distribution import make_discrete, point_mass

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

A_PAIRS = [(-10.0, 0.1), (0.0, 0.5), (5.0, 0.4)]

# lines printed by the acceptance module, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def A():
    return make_discrete(A_PAIRS)


@pytest.fixture
def delta():
    return point_mass


@st.composite
def rational_laws(draw, max_atoms=6, grids=(2, 3, 4, 6, 12), values=st.integers(-6, 6)):
    """(pairs, exact law) with masses on a 1/m grid."""
    m = draw(st.sampled_from(grids))
    k = draw(st.integers(1, min(max_atoms, m)))
    vals = draw(st.lists(values, min_size=k, max_size=k, unique=True))
    cuts = sorted(draw(st.lists(st.integers(1, m - 1), min_size=k - 1, max_size=k - 1, unique=True))) if k > 1 else []
    units = [b - a for a, b in zip([0, *cuts], [*cuts, m])]
    exact = {v: Fraction(u, m) for v, u in zip(vals, units)}
    return exact


@st.composite
def rational_weights(draw, n, grid=12, allow_zero=True):
    lo = 0 if allow_zero else 1
    units = draw(st.lists(st.integers(lo, grid), min_size=n, max_size=n))
    j = draw(st.integers(0, n - 1))
    units[j] = max(units[j], 1)
    total = sum(units)
    return [Fraction(u, total) for u in units]


@st.composite
def mixture_instances(draw, max_components=3, max_atoms=6):
    n = draw(st.integers(1, max_components))
    laws = [draw(rational_laws(max_atoms=max_atoms)) for _ in range(n)]
    beta = draw(rational_weights(n))
    return laws, beta


def to_dist(lw):
    return make_discrete((float(v), float(p)) for v, p in lw.items())


def levels_of(d):
    """0, 1, each breakpoint, and midpoints between consecutive breakpoints."""
    edges = [0.0, *d.cumulative]
    return sorted({0.0, 1.0, *d.cumulative, *((a + b) / 2 for a, b in zip(edges, edges[1:]))})


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
