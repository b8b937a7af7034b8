import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stringdamp.pwlin import (TWO_PI, PiecewiseLinear, combine, concatenate, even_odd_parts,
                              evaluate, integrate, refine_crossings, segments_at_level,
                              sup_norm)

PI = math.pi


def tent():
    return PiecewiseLinear([0.0, PI], [0.0, 1.0], [1 / PI, -1 / PI])


def off_break(n=97, seed=0):
    return np.random.default_rng(seed).uniform(0, TWO_PI, n)


@st.composite
def pw_fields(draw):
    n = draw(st.integers(1, 6))
    xs = sorted(set(draw(st.lists(st.floats(0.01, TWO_PI - 0.01), min_size=n - 1,
                                  max_size=n - 1))))
    xs = [0.0] + [x for i, x in enumerate(xs) if i == 0 or x - xs[i - 1] > 1e-6]
    vals = draw(st.lists(st.floats(-5, 5), min_size=len(xs), max_size=len(xs)))
    slopes = draw(st.lists(st.floats(-3, 3), min_size=len(xs), max_size=len(xs)))
    return PiecewiseLinear(xs, vals, slopes)


def test_eval_constant():
    assert evaluate(PiecewiseLinear.constant(2.0), PI) == 2.0


def test_eval_interpolates_and_is_left_closed():
    f = tent()
    assert evaluate(f, PI / 2) == pytest.approx(0.5)
    assert evaluate(f, PI) == 1.0


def test_eval_wraps_periodically():
    f = tent()
    assert f(PI / 2 + 3 * TWO_PI) == pytest.approx(0.5)


def test_rejects_bad_breakpoints():
    with pytest.raises(ValueError):
        PiecewiseLinear([0.5, 1.0], [0, 0], [0, 0])
    with pytest.raises(ValueError):
        PiecewiseLinear([0.0, 2.0, 1.0], [0, 0, 0], [0, 0, 0])


def test_combine_examples():
    two, half = PiecewiseLinear.constant(2.0), PiecewiseLinear.constant(0.5)
    r = combine(two, half, 1, -1)
    assert r.n_segments == 1 and r(1.0) == 1.5
    f = tent()
    assert np.all(combine(f, f, 1, -1)(off_break()) == 0.0)
    hat = PiecewiseLinear.from_points([0.0, PI], [0.0, 1.0])
    assert list(combine(two, hat, 1, 1).breakpoints) == [0.0, PI]


@settings(max_examples=60, deadline=None)
@given(pw_fields(), pw_fields(), st.floats(-3, 3), st.floats(-3, 3))
def test_combine_is_pointwise(f, g, a, b):
    x = off_break(seed=1)
    h = combine(f, g, a, b)
    assert np.allclose(h(x), a * f(x) + b * g(x), atol=1e-9)
    assert set(f.breakpoints) | set(g.breakpoints) >= set(h.breakpoints)


def test_even_odd_examples():
    e, o = even_odd_parts(PiecewiseLinear.constant(3.0))
    x = off_break()
    assert np.allclose(e(x), 3.0) and np.allclose(o(x), 0.0)
    hat = PiecewiseLinear([0.0, PI], [0.0, PI], [1.0, -1.0])
    assert np.allclose(even_odd_parts(hat)[1](x), 0.0, atol=1e-12)
    e, o = even_odd_parts(PiecewiseLinear.step([0.0, PI], [1.0, 0.0]))
    assert np.allclose(e(x), 0.5)
    assert np.allclose(np.abs(o(x)), 0.5)


@settings(max_examples=40, deadline=None)
@given(pw_fields())
def test_even_odd_reconstruct(f):
    e, o = even_odd_parts(f)
    x = off_break(seed=2)
    assert np.allclose(e(x) + o(x), f(x), atol=1e-9)
    assert np.allclose(e(TWO_PI - x), e(x), atol=1e-9)
    assert np.allclose(o(TWO_PI - x), -o(x), atol=1e-9)


def test_sup_norm_examples():
    c = PiecewiseLinear.constant(-1.5)
    assert sup_norm(c, quotient_constants=True) == 0.0
    assert sup_norm(c) == 1.5
    assert sup_norm(tent(), quotient_constants=True) == pytest.approx(0.5)


def test_refine_crossings_examples():
    ramp = PiecewiseLinear([0.0], [-1.0], [2.0 / TWO_PI])
    r = refine_crossings(ramp, 0.5)
    assert np.allclose(r.breakpoints, [0.0, PI / 2, 3 * PI / 2])
    two = PiecewiseLinear.constant(2.0)
    assert refine_crossings(two, 0.5) is two
    half = PiecewiseLinear.constant(0.5)
    assert refine_crossings(half, 0.5) is half
    assert segments_at_level(half, 0.5).all()


def test_integrate_examples():
    assert integrate(PiecewiseLinear.constant(2.0), 0, TWO_PI, "abs") == pytest.approx(4 * PI)
    saw = PiecewiseLinear([0.0], [-PI], [1.0])
    assert integrate(saw, 0, TWO_PI, "abs") == pytest.approx(PI**2)
    assert integrate(PiecewiseLinear.constant(0.7), 0, TWO_PI, "square") == pytest.approx(
        TWO_PI * 0.49)


@settings(max_examples=40, deadline=None)
@given(pw_fields())
def test_integrate_matches_quadrature(f):
    x = (np.arange(200000) + 0.5) / 200000 * TWO_PI
    y = f(x)
    h = TWO_PI / x.size
    assert integrate(f, 0, TWO_PI) == pytest.approx(np.sum(y) * h, abs=1e-3)
    assert integrate(f, 0, TWO_PI, "abs") == pytest.approx(np.sum(np.abs(y)) * h, abs=1e-3)


def test_shift_and_reflect():
    f = tent()
    x = off_break()
    assert np.allclose(f.shift(1.0)(x), f(x + 1.0))
    assert np.allclose(f.reflect()(x), f(TWO_PI - x))


def test_text_round_trip():
    f = PiecewiseLinear([0.0, 1.0, 4.0], [0.1, -2.0, 1 / 3], [0.0, 1e-3, -7.0])
    g = PiecewiseLinear.from_text(f.to_text())
    assert np.array_equal(f.breakpoints, g.breakpoints)
    assert np.array_equal(f.values, g.values) and np.array_equal(f.slopes, g.slopes)


def test_trig_moments():
    f = PiecewiseLinear([0.0], [-PI], [1.0])
    # int (x - pi) sin(nx) = -2 pi / n
    assert f.sin_moment(3) == pytest.approx(-TWO_PI / 3)
    assert f.cos_moment(2) == pytest.approx(0.0, abs=1e-12)


def test_concatenate():
    a = PiecewiseLinear.constant(1.0, 2.0, periodic=False)
    b = PiecewiseLinear.constant(-1.0, 3.0, periodic=False)
    c = concatenate([a, b])
    assert c.domain_length == 5.0 and c(1.0) == 1.0 and c(4.0) == -1.0
