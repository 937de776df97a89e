from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdowker.bifiltration import BuildParams
from mdowker.core import EmpiricalMeasure, PointCloud
from mdowker.metrics import (
    PreconditionError,
    _one_direction,
    check_stability_lemma,
    hausdorff,
    prokhorov,
)
from mdowker.relations import make_rng
from oracles import prokhorov_by_definition


def measure(points, weights):
    return EmpiricalMeasure(PointCloud(points), weights)


def test_hausdorff_examples():
    assert hausdorff([0.0], [0.0]) == 0.0
    assert hausdorff([0.0], [3.0]) == 3.0
    assert hausdorff([0.0, 10.0], [0.0]) == 10.0
    with pytest.raises(ValueError):
        hausdorff(PointCloud(np.zeros((0, 1))), [0.0])
    with pytest.raises(ValueError):
        hausdorff([0.0], [1.0], metric="cosine")


small_clouds = st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=6)


@given(small_clouds, small_clouds, small_clouds)
def test_hausdorff_pseudometric(a, b, c):
    ab, ba = hausdorff(a, b), hausdorff(b, a)
    assert ab == ba
    assert hausdorff(a, c) <= ab + hausdorff(b, c) + 1e-9


def test_prokhorov_examples():
    half = Fraction(1, 2)
    mu = measure([0.0, 1.0], [half, half])
    assert prokhorov(mu, mu) == 0
    for d in (0.25, 0.5, 1.0, 2.5):
        assert prokhorov(measure([0.0], [1]), measure([d], [1])) == min(Fraction(d), 1)
    assert prokhorov(mu, measure([0.0], [1])) == half


def test_prokhorov_rejects_non_probability():
    with pytest.raises(ValueError):
        prokhorov(measure([0.0], [2]), measure([0.0], [1]))
    assert prokhorov(measure([0.0], [2]), measure([0.0], [1]), probability=False) == 1


@st.composite
def measure_pair(draw):
    xs = draw(st.lists(st.integers(0, 6), min_size=1, max_size=4, unique=True))
    ys = draw(st.lists(st.integers(0, 6), min_size=1, max_size=4, unique=True))
    ws = draw(st.lists(st.integers(1, 5), min_size=len(xs), max_size=len(xs)))
    vs = draw(st.lists(st.integers(1, 5), min_size=len(ys), max_size=len(ys)))
    scale = draw(st.sampled_from([0.1, 0.25, 1.0]))
    xs = [x * scale for x in xs]
    ys = [y * scale for y in ys]
    return xs, [Fraction(w, sum(ws)) for w in ws], ys, [Fraction(v, sum(vs)) for v in vs]


@given(measure_pair())
@settings(max_examples=60, deadline=None)
def test_prokhorov_against_definition(pair):
    xs, ws, ys, vs = pair
    got = prokhorov(measure(xs, ws), measure(ys, vs))
    assert got == prokhorov_by_definition(xs, ws, ys, vs)


@given(measure_pair())
@settings(max_examples=40, deadline=None)
def test_prokhorov_symmetric_bounded(pair):
    xs, ws, ys, vs = pair
    a, b = measure(xs, ws), measure(ys, vs)
    d = prokhorov(a, b)
    assert d == prokhorov(b, a)
    assert 0 <= d <= 1


@given(st.lists(st.integers(1, 6), min_size=3, max_size=3), st.lists(st.integers(1, 6), min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_prokhorov_total_variation_bound(w, v):
    pts = [0.0, 1.0, 2.0]
    w = [Fraction(x, sum(w)) for x in w]
    v = [Fraction(x, sum(v)) for x in v]
    d = prokhorov(measure(pts, w), measure(pts, v))
    assert d <= sum(abs(a - b) for a, b in zip(w, v)) / 2
    assert (d == 0) == (w == v)


def test_prokhorov_counting_measures():
    a = EmpiricalMeasure.counting(PointCloud([0.0, 1.0]))
    b = EmpiricalMeasure.counting(PointCloud([0.0, 1.0, 5.0]))
    assert prokhorov(a, b, probability=False) == 1
    xs, ws = [0.0, 1.0], [1, 1]
    assert prokhorov(a, b, probability=False) == prokhorov_by_definition(xs, ws, [0.0, 1.0, 5.0], [1, 1, 1])


def _counting(X):
    return EmpiricalMeasure.counting(PointCloud(X))


GRID = (range(1, 5), np.linspace(0.0, 0.6, 7))


def test_stability_identity():
    X = make_rng(0).random((8, 2))
    rep = check_stability_lemma(X, _counting(X), X, _counting(X), BuildParams(dim_max=2), 0, GRID)
    assert rep.passed and rep.checked > 0


def test_stability_translation():
    # dyadic coordinates keep every distance exact
    X = make_rng(1).integers(0, 16, size=(8, 2)) / 16
    t = 1 / 16
    Y = X + np.array([t, 0.0])
    rep = check_stability_lemma(X, _counting(X), Y, _counting(Y), BuildParams(dim_max=2), Fraction(t), GRID)
    assert rep.passed


def test_stability_probability_measures():
    rng = make_rng(2)
    X = rng.random((10, 2))
    Y = X + rng.uniform(-0.03, 0.03, size=X.shape)
    mu1, mu2 = EmpiricalMeasure.probability(PointCloud(X)), EmpiricalMeasure.probability(PointCloud(Y))
    delta = max(Fraction(hausdorff(X, Y)), prokhorov(mu1, mu2))
    grid = ([Fraction(k, 10) for k in range(1, 11)], np.linspace(0, 0.5, 6))
    assert check_stability_lemma(X, mu1, Y, mu2, BuildParams(dim_max=2), delta, grid).passed


def test_stability_precondition():
    X = make_rng(3).random((5, 2))
    Y = X + 0.1
    with pytest.raises(PreconditionError):
        check_stability_lemma(X, _counting(X), Y, _counting(Y), BuildParams(), 0.01, GRID)


def test_stability_checker_can_fail():
    # delta = 0 is below the Prokhorov distance of these measures
    X = PointCloud([0.0, 1.0])
    mu1 = EmpiricalMeasure.counting(X)
    mu2 = EmpiricalMeasure.counting(PointCloud([0.0]))
    checked, bad = _one_direction(X, mu1, X, mu2, Fraction(0), ([2], [0.5]), 1, "1->2")
    assert bad == ("1->2", 2, 0.5, (0,), (0,))
