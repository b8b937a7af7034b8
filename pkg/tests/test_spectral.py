import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stringdamp.spectral import (SpectralSet, admissibility, eisenstein_kernel,
                                 finite_admissibility, limit_roots, modes_from_spectral,
                                 secular_function, secular_limit_check, secular_roots,
                                 secular_table, singular_field_check)

PI = math.pi
T_GRID = np.linspace(0.0, 4 * PI, 801)


def test_secular_small_cutoffs():
    assert secular_roots(1)[0] == pytest.approx(1 / math.sqrt(3), abs=1e-12)
    d = math.sqrt(145.0)
    assert secular_roots(2) == pytest.approx(np.sqrt([(15 - d) / 10, (15 + d) / 10]), abs=1e-12)


@pytest.mark.parametrize("N", [1, 3, 10, 57])
def test_secular_roots_bracketing(N):
    mu = secular_roots(N)
    assert len(mu) == N
    k = np.arange(N)
    assert np.all(mu > k) and np.all(mu < k + 1)
    assert all(abs(secular_function(m * m, N)) < 1e-6 * (1 + N * N) for m in mu)


def test_limit_roots():
    assert list(limit_roots(1)) == [0.5]
    assert list(limit_roots(3)) == [0.5, 1.5, 2.5]
    with pytest.raises(ValueError):
        limit_roots(0)


def test_first_root_approaches_half():
    gaps = [secular_roots(N)[0] - 0.5 for N in (10, 50, 200)]
    assert gaps[0] > gaps[1] > gaps[2] > 0 and gaps[2] < 0.02


def test_secular_table_rows():
    rows = secular_table([10, 20], [0, 1])
    assert [(r["N"], r["k"]) for r in rows] == [(10, 0), (10, 1), (20, 0), (20, 1)]


def test_eisenstein_examples():
    k0 = eisenstein_kernel(0.5, 0.0)
    assert k0.lhs == pytest.approx(0.0, abs=1e-8) and k0.rhs_stated == 0.0
    kp = eisenstein_kernel(0.5, PI)
    assert kp.lhs == pytest.approx(-PI, abs=1e-6)
    assert kp.rhs_stated == pytest.approx(-2.0)
    assert kp.ratio == pytest.approx(PI / 2, abs=1e-6)


def test_secular_series_limit_is_classical_cot():
    chk = secular_limit_check(0.3, K=10**6)
    assert chk["series"] == pytest.approx(chk["classical"], abs=1e-9)
    assert chk["series"] != pytest.approx(chk["stated"], abs=1e-3)


def test_modes_from_spectral_examples():
    S = SpectralSet([0.5], [1.0])
    assert modes_from_spectral(S, 1)[0] == pytest.approx(8 / 3)
    S3 = SpectralSet([0.5, 1.5], [0.2 + 0.1j, -0.4j])
    assert modes_from_spectral(SpectralSet(S3.mu, 3 * S3.R), 6, 0.7) == pytest.approx(
        3 * modes_from_spectral(S3, 6, 0.7))
    assert np.all(modes_from_spectral(SpectralSet.empty(), 4) == 0)
    with pytest.raises(ValueError):
        modes_from_spectral(SpectralSet([2.0], [1.0]), 3)


def test_admissibility_examples():
    m, ok = admissibility(SpectralSet([0.5], [0.4]), T_GRID)
    assert m == pytest.approx(0.4) and ok
    assert not admissibility(SpectralSet([0.5], [0.6]), T_GRID)[1]
    assert admissibility(SpectralSet.empty(), T_GRID) == (0.0, True)
    m, ok = finite_admissibility([0.3], 5, T_GRID)
    assert m == pytest.approx(0.3, abs=1e-6) and ok


def test_singular_examples():
    rep = singular_field_check(SpectralSet([0.5], [1.0]), T_GRID)
    assert rep.ok
    with pytest.raises(ValueError):
        singular_field_check(SpectralSet([1.0], [1.0]), T_GRID)
    rep = singular_field_check(SpectralSet([0.5], [1.2]), T_GRID)
    assert not rep.admissible and rep.max_abs_u == pytest.approx(1.2)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 12), st.floats(-1, 1), st.floats(-1, 1)),
                min_size=1, max_size=5, unique_by=lambda r: r[0]))
def test_half_integer_controls_are_antiperiodic(entries):
    entries = sorted(entries)
    S = SpectralSet([k + 0.5 for k, _, _ in entries], [a + 1j * b for _, a, b in entries])
    rep = singular_field_check(S, T_GRID)
    assert rep.antiperiodic_residual < 1e-10 and rep.boundary_residual < 1e-10


def test_spectral_text_round_trip():
    S = SpectralSet([0.5, 2.5], [0.1 - 0.2j, 1 / 3])
    back = SpectralSet.from_text(S.to_text())
    assert np.array_equal(back.mu, S.mu) and np.array_equal(back.R, S.R)


def test_rejects_bad_frequencies():
    with pytest.raises(ValueError):
        SpectralSet([1.5, 0.5], [1, 1])
    with pytest.raises(ValueError):
        SpectralSet([-0.5], [1])
    with pytest.raises(ValueError):
        secular_roots(0)
