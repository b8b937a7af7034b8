"""The ten acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line, printed together at the end of the
run, and then asserts the same outcome.
"""

import math

import numpy as np
import pytest

from stringdamp import verify as V

from .conftest import ACCEPTANCE_LINES

SEED = V.DEFAULT_SEED


def record(criterion, title, checks):
    ok = all(c.passed for c in checks)
    parts = "; ".join(f"{c.name} {'ok' if c.passed else 'FAILED'} {_brief(c.measured)}"
                      for c in checks)
    line = f"criterion {criterion:>2} {'PASS' if ok else 'FAIL'}: {title}: {parts}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _brief(measured):
    items = []
    for k, v in measured.items():
        if isinstance(v, float):
            items.append(f"{k}={v:.3g}")
        elif isinstance(v, (int, bool)):
            items.append(f"{k}={v}")
    return "(" + ", ".join(items) + ")"


def test_criterion_01_exact_decay_law():
    assert record(1, "exact decay law", V.check_decay_law(SEED))


def test_criterion_02_optimal_rate():
    assert record(2, "asymptotic optimality rate", V.check_optimal_rate(SEED))


def test_criterion_03_near_target():
    # The stated law uses the period index k = floor(t / 2pi) at every sampled t.
    checks = V.check_near_target(SEED)
    assert record(3, "near-target characterization", checks)


def test_criterion_04_reach_bound():
    assert record(4, "a priori reachability bound", V.check_reach_bound(SEED))


def test_criterion_05_limit_shape():
    assert record(5, "limit-shape convergence", V.check_shape(SEED))


def test_criterion_06_duality():
    assert record(6, "duality attainment", V.check_duality(SEED))


def test_criterion_07_secular_roots():
    assert record(7, "spectral truncation", V.check_secular(SEED))


def test_criterion_08_singular_arcs():
    assert record(8, "singular-arc identities", V.check_singular(SEED))


def test_criterion_09_energy_contraction():
    checks = V.check_energy(SEED)
    offender = checks[0].logged.get("offending_pair")
    if offender is not None:
        print("offending pair:", offender)
    assert record(9, "energy contraction (empirical)", checks)


def test_criterion_10_kernel_oracle():
    checks = V.check_kernel(SEED)
    ok = record(10, "Eisenstein kernel oracle", checks)
    ratio = checks[1].logged["ratio"]
    ACCEPTANCE_LINES.append(f"criterion 10 logged: lhs/rhs_stated at mu=1/2, x=pi is {ratio:.12f} "
                            f"(pi/2 = {math.pi / 2:.12f})")
    assert ok


# Companions to the two failing criteria: the parts that do hold, kept green.

def test_near_target_crossing_count_law():
    checks = {c.name: c for c in V.check_near_target(SEED)}
    assert checks["near_target_crossing_sign"].passed
    assert checks["near_target_period_boundaries"].passed


def leading_constant(xi, samples=2_000_000):
    """``lim N e(N)`` from the drift expansion, by a fine midpoint rule."""
    per = xi.trace_line(drift_scale=0.0)
    t = (np.arange(samples) + 0.5) / samples * V.TWO_PI
    p = per(t)
    return float(np.mean((t / V.TWO_PI - 0.5) * (np.abs(p + xi.phi[0]) - np.abs(p))))


def test_shape_error_is_asymptotically_c_over_n():
    # The seeded vectors of criterion 5: N e(N) tends to a vector-dependent
    # constant, from below for some of them, which is what breaks a c/N bound
    # with c fitted at N = 4.
    rng = V._rng(SEED, 5)
    from_below = 0
    for _ in range(10):
        xi = V.random_dual(rng, int(rng.integers(1, 9)), reduced=False)
        e = V.shape_errors(xi, (4, 512))
        c_inf = abs(leading_constant(xi))
        assert 512 * e[1] == pytest.approx(c_inf, abs=5e-5)
        from_below += 4 * e[0] < c_inf - 1e-6
    assert from_below >= 1


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_decay_suite_other_seeds(seed):
    assert all(c.passed for c in V.check_decay_law(seed) + V.check_reach_bound(seed))
