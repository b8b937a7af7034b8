import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from stringdamp.duals import DualVector, TrigLine, boundary_trace, random_dual, zeta_profile

PI = math.pi


@pytest.mark.parametrize("phi,psi,t,expected", [
    ({}, {0: 1.0}, 2.7, 1.0),
    ({0: 1.0}, {}, 2.7, 2.7),
    ({}, {1: 1.0}, PI, -1.0),
])
def test_boundary_trace(phi, psi, t, expected):
    xi = DualVector.from_modes(1, phi, psi)
    assert boundary_trace(xi, t) == pytest.approx(expected)


@pytest.mark.parametrize("phi,psi,fn", [
    ({1: 1.0}, {}, np.sin),
    ({}, {1: 1.0}, np.cos),
    ({1: 1.0}, {1: 1.0}, lambda t: np.cos(t) + np.sin(t)),
])
def test_zeta_profile(phi, psi, fn):
    prof = zeta_profile(DualVector.from_modes(1, phi, psi))
    t = np.linspace(-3, 9, 50)
    assert np.allclose(prof.zeta(t), fn(t))
    assert np.allclose(prof.xi1(t) + prof.eta(t), prof.zeta(t))


def test_trace_matches_adjoint_formula():
    xi = random_dual(np.random.default_rng(3), 5, reduced=False)
    t = 1.234
    n = np.arange(1, 6)
    direct = xi.psi[0] + xi.phi[0] * t + np.sum(xi.psi[1:] * np.cos(n * t)
                                                 + xi.phi[1:] / n * np.sin(n * t))
    assert boundary_trace(xi, t) == pytest.approx(direct)


def test_reduced_flag():
    assert DualVector([0, 1], [0, 2]).is_reduced
    with pytest.raises(ValueError):
        DualVector([1.0], [0.0]).require_reduced()
    assert DualVector([1.0, 2.0], [3.0, 4.0]).reduced().is_reduced


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        DualVector([np.nan], [0.0])


def test_text_round_trip():
    xi = random_dual(np.random.default_rng(0), 4, reduced=False)
    back = DualVector.from_text(xi.to_text())
    assert np.array_equal(back.phi, xi.phi) and np.array_equal(back.psi, xi.psi)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.floats(0.5, 20.0))
def test_abs_integral_against_trapezoid(seed, N, T):
    line = random_dual(np.random.default_rng(seed), N, reduced=False).trace_line()
    t = np.linspace(0.0, T, 400001)
    ref = trapezoid(np.abs(line(t)), t)
    assert line.abs_integral(0.0, T) == pytest.approx(ref, rel=1e-7, abs=1e-7)


def test_roots_are_sign_changes():
    line = TrigLine([0.0], [1.0])
    r = line.roots(0.1, 6 * PI - 0.1)
    assert np.allclose(r, [PI, 2 * PI, 3 * PI, 4 * PI, 5 * PI])
