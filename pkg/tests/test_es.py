import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import levels_of, rational_laws, to_dist
from riskmix.distribution import essinf, expectation, make_discrete, point_mass, upper_quantile
from riskmix.errors import LevelOutOfDomain
from riskmix.es import (
    EsValue,
    Representation,
    RepresentationMismatch,
    es,
    es_curve,
    es_integral,
    es_tail,
)

A_EXACT = oracles.law([(-10, Fraction(1, 10)), (0, Fraction(1, 2)), (5, Fraction(2, 5))])


@pytest.mark.parametrize(
    "alpha, level",
    [(0.05, Fraction(1, 20)), (0.1, Fraction(1, 10)), (0.2, Fraction(1, 5)), (0.6, Fraction(3, 5)), (1.0, Fraction(1))],
)
def test_table_against_exact_oracle(A, alpha, level):
    expected = float(oracles.es(A_EXACT, level))
    assert es_tail(A, alpha) == pytest.approx(expected, abs=1e-12)
    assert es_integral(A, alpha) == pytest.approx(expected, abs=1e-12)


def test_frozen_table(A):
    # values produced by the exact oracle above
    assert es_integral(A, 0.2) == pytest.approx(5.0, abs=1e-12)
    assert es_integral(A, 1.0) == pytest.approx(-1.0, abs=1e-12)
    assert es_tail(A, 0.2) == pytest.approx(5.0, abs=1e-12)
    assert es_tail(A, 0.05) == pytest.approx(10.0, abs=1e-12)
    assert es_tail(A, 0.6) == pytest.approx(1.6666666667, abs=1e-10)


@pytest.mark.parametrize("alpha", [0.01, 0.3, 1.0])
def test_point_mass_es(alpha):
    assert es_integral(point_mass(2.5), alpha) == -2.5
    assert es_tail(point_mass(2.5), alpha) == -2.5


def test_es_branches(A):
    assert es(A, 0) == EsValue(10.0, 0.0, Representation.LEVEL0)
    assert es(A, 1).value == pytest.approx(-1.0, abs=1e-15)
    assert es(A, 1).representation is Representation.LEVEL1
    v = es(A, 0.1, verify=True)
    assert v.value == pytest.approx(10.0, abs=1e-12)
    assert v.representation is Representation.TAIL_EXPECTATION
    assert float(v) == v.value


@pytest.mark.parametrize("fn", [es_tail, es_integral])
@pytest.mark.parametrize("alpha", [0.0, -0.5, 1.5])
def test_open_level_domain(A, fn, alpha):
    with pytest.raises(LevelOutOfDomain):
        fn(A, alpha)


@pytest.mark.parametrize("alpha", [-0.01, 1.01])
def test_es_domain(A, alpha):
    with pytest.raises(LevelOutOfDomain, match=r"level out of \[0,1\]"):
        es(A, alpha)


def test_verify_flags_a_broken_path(A, monkeypatch):
    mod = sys.modules["riskmix.es"]
    monkeypatch.setattr(mod, "es_integral", lambda d, a: 123.0)
    with pytest.raises(RepresentationMismatch):
        mod.es(A, 0.3, verify=True)


def test_es_curve(A):
    got = es_curve(A, [1.0, 0.05, 0.2])
    assert [a for a, _ in got] == [0.05, 0.2, 1.0]
    assert [v for _, v in got] == pytest.approx([10.0, 5.0, -1.0], abs=1e-12)
    assert es_curve(point_mass(0), [0, 0.5, 1]) == [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0)]
    assert es_curve(A, []) == []
    with pytest.raises(LevelOutOfDomain):
        es_curve(A, [0.5, 2.0])


# properties


@given(rational_laws(), st.integers(1, 24))
def test_matches_exact_oracle(lw, k):
    d = to_dist(lw)
    level = Fraction(k, 24)
    expected = float(oracles.es(lw, level))
    assert es_tail(d, float(level)) == pytest.approx(expected, rel=1e-9, abs=1e-9)
    assert es_integral(d, float(level)) == pytest.approx(expected, rel=1e-9, abs=1e-9)


@given(rational_laws())
def test_representation_equivalence(lw):
    d = to_dist(lw)
    for a in levels_of(d):
        if a > 0:
            t = es_tail(d, a)
            assert abs(es_integral(d, a) - t) <= 1e-9 * (1 + abs(t))


@given(rational_laws())
def test_monotone_and_bounded(lw):
    d = to_dist(lw)
    values = [es(d, a).value for a in levels_of(d)]
    for u, v in zip(values, values[1:]):
        assert v <= u + 1e-9 * (1 + abs(u))
    assert max(values) == pytest.approx(-essinf(d), abs=1e-12)


@given(rational_laws(), st.sampled_from([0.0, 0.5, 1.0, 3.0, 17.25]), st.floats(0.0, 1.0))
def test_positive_homogeneity(lw, lam, alpha):
    d = to_dist(lw)
    base = es(d, alpha).value
    assert es(d.scaled(lam), alpha).value == pytest.approx(lam * base, rel=1e-9, abs=1e-9)


@given(rational_laws(), st.sampled_from([-7.5, -1.0, 0.25, 4.0]), st.floats(0.0, 1.0))
def test_translation(lw, c, alpha):
    d = to_dist(lw)
    assert es(d.shifted(c), alpha).value == pytest.approx(es(d, alpha).value - c, rel=1e-9, abs=1e-9)


@given(rational_laws())
def test_level_one_is_minus_mean(lw):
    d = to_dist(lw)
    assert es(d, 1.0).value == -expectation(d)


@given(rational_laws())
def test_upper_quantile_integrates_to_same_es(lw):
    """Integrating the upper quantile instead of the lower gives the same ES."""
    d = to_dist(lw)
    edges = [0.0, *d.cumulative]
    for k in range(1, len(edges)):
        alpha = edges[k]
        # upper quantile is constant on each [edge, next edge), so sample left ends
        integral = sum(upper_quantile(d, lo) * (hi - lo) for lo, hi in zip(edges[:k], edges[1 : k + 1]))
        assert -integral / alpha == pytest.approx(es_tail(d, alpha), rel=1e-9, abs=1e-9)


def test_boundary_atom_split_fractionally():
    d = make_discrete([(-1, 0.5), (1, 0.5)])
    # the 0.75 tail takes all of the -1 atom and half of the +1 atom
    assert es_tail(d, 0.75) == pytest.approx(-(-0.5 + 0.25) / 0.75, abs=1e-15)
