import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stringdamp.energy import (contraction_series, energy_first_order, energy_second_order,
                               laplacian_pairings, write_energy_csv)
from stringdamp.friction import random_field
from stringdamp.pwlin import TWO_PI, PiecewiseLinear

PI = math.pi
const = PiecewiseLinear.constant


def test_first_order_examples():
    assert energy_first_order(const(1.3)) == pytest.approx(PI * 1.69)
    assert energy_first_order(const(0.0)) == 0.0
    saw = PiecewiseLinear([0.0], [-PI], [1.0])
    assert energy_first_order(saw) == pytest.approx(PI**3 / 3)


def test_second_order_examples():
    assert energy_second_order([0.0], [0.0, 1.0]) == pytest.approx(PI / 2)
    assert energy_second_order([0.0, 1.0], [0.0]) == pytest.approx(PI / 2)
    assert energy_second_order([0.0, 0.0], [0.0, 0.0]) == 0.0


def test_second_order_matches_first_order_of_g():
    # f0 = cos 2x, f1 = 0.5 + cos x, sampled finely; g = -2 sin 2x + 0.5 + cos x
    x = np.linspace(0, TWO_PI, 4001)
    g = PiecewiseLinear.from_points(x[:-1], -2 * np.sin(2 * x[:-1]) + 0.5 + np.cos(x[:-1]))
    assert energy_second_order([0, 0, 1.0], [0.5, 1.0]) == pytest.approx(
        energy_first_order(g), rel=1e-5)


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=8),
       st.lists(st.floats(-3, 3), min_size=1, max_size=8))
def test_laplacian_pairings_cancel(u, v):
    a, b = laplacian_pairings(u, v)
    assert a + b == pytest.approx(0.0, abs=1e-9)


def test_contraction_examples():
    rep = contraction_series(const(2.0), const(0.3), [0.0, TWO_PI])
    assert rep.values == pytest.approx([PI * 1.7**2, PI * 1.3**2])
    assert rep.monotone
    G = random_field(np.random.default_rng(0))
    assert np.all(contraction_series(G, G, [0.0, 1.0, 7.0]).values == 0.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.2, 4.0))
def test_energy_to_target_is_nonincreasing(seed, sup):
    G = random_field(np.random.default_rng(seed), 9, sup=sup, continuous=False)
    rep = contraction_series(G, const(0.0), np.linspace(0, 3 * TWO_PI, 25))
    assert rep.max_uptick <= 1e-10


def test_rejects_bad_times():
    with pytest.raises(ValueError):
        contraction_series(const(1.0), const(0.0), [1.0, 0.5])


def test_csv(tmp_path):
    rep = contraction_series(const(2.0), const(0.3), [0.0, PI, TWO_PI])
    write_energy_csv(rep, tmp_path / "energy.csv")
    lines = (tmp_path / "energy.csv").read_text().splitlines()
    assert lines[0] == "t,E,uptick" and len(lines) == 4
