"""Seeded verification suites.

Every check draws its random inputs from ``default_rng([seed, tag])`` so that
suites are reproducible and independent of one another.  A check carries the
values it asserts on (``measured``) and values that are only reported
(``logged``).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .duals import DualVector, random_dual
from .energy import contraction_series
from .friction import (apply_control, decay_report, field_at, random_control,
                       random_field, solve_track)
from .pwlin import TWO_PI, PiecewiseLinear
from .reach import (StringState, extremal_state, field_rho, limit_support_full,
                    limit_support_reduced, pairing, support_normalized,
                    support_reduced)
from .spectral import (SpectralSet, eisenstein_kernel, random_half_integer_set,
                       secular_roots, singular_field_check)

DEFAULT_SEED = 20240611


@dataclass
class Check:
    name: str
    criterion: int
    passed: bool
    measured: dict = field(default_factory=dict)
    logged: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name} (criterion {self.criterion})"


def _rng(seed: int, tag: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), tag])


def _timed(fn):
    def run(seed):
        t0 = time.perf_counter()
        checks = fn(seed)
        dt = time.perf_counter() - t0
        for c in checks:
            c.seconds = dt
        return checks
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _decay_fields(seed: int, count: int = 20) -> list[PiecewiseLinear]:
    rng = _rng(seed, 1)
    return [random_field(rng, n_breaks=12, sup=5.0) for _ in range(count)]


@_timed
def check_decay_law(seed: int) -> list[Check]:
    """rho(2k*pi) = rho(0) - 2k*pi for k = 1..4 while the sup norm stays above k + 1/2."""
    t0 = time.perf_counter()
    worst = 0.0
    for G in _decay_fields(seed):
        track = solve_track(G, 4 * TWO_PI)
        rho0 = field_rho(G, "stop-moving")
        for k in range(1, 5):
            rk = field_rho(field_at(track, k * TWO_PI), "stop-moving")
            worst = max(worst, abs(rk - (rho0 - k * TWO_PI)))
    runtime = time.perf_counter() - t0
    return [
        Check("decay_law_exact", 1, worst <= 1e-10, {"max_abs_error": worst}),
        Check("decay_law_runtime", 1, runtime < 1.0, {"seconds": runtime}),
    ]


@_timed
def check_optimal_rate(seed: int) -> list[Check]:
    """Feedback rate is 1 over 8*pi; open-loop controls do no better."""
    t0 = time.perf_counter()
    T = 4 * TWO_PI
    fields = _decay_fields(seed)
    rate_err = max(abs(decay_report(G, T).rate - 1.0) for G in fields)
    rng = _rng(seed, 2)
    best_open = -math.inf
    for i in range(100):
        u = random_control(rng, T)
        G = fields[i % len(fields)]
        rhoT = field_rho(apply_control(G, u, T), "stop-moving")
        best_open = max(best_open, (field_rho(G, "stop-moving") - rhoT) / T)
    runtime = time.perf_counter() - t0
    return [
        Check("feedback_rate_is_one", 2, rate_err <= 1e-10, {"max_abs_rate_error": rate_err}),
        Check("open_loop_rate_bound", 2, best_open <= 1.0 + 1e-9, {"max_open_loop_rate": best_open}),
        Check("optimal_rate_runtime", 2, runtime < 5.0, {"seconds": runtime}),
    ]


def near_target_samples(seed: int, fields: int = 20, times: int = 50, xs: int = 20):
    """Yield ``(G, track, t, x, flow values)`` for seeded fields with sup norm at most 1/2."""
    rng = _rng(seed, 3)
    for _ in range(fields):
        G = random_field(rng, n_breaks=10, sup=rng.uniform(0.05, 0.5))
        track = solve_track(G, 4 * TWO_PI)
        ts = rng.uniform(0.0, 4 * TWO_PI, times)
        for t in ts:
            x = rng.uniform(0.0, TWO_PI, xs)
            yield G, track, float(t), x, field_at(track, float(t))(x)


@_timed
def check_near_target(seed: int) -> list[Check]:
    """Near the target the flow only flips sign; rho is frozen at multiples of 2*pi.

    The sign is ``(-1)**floor((x+t)/2pi)``, the number of times the
    characteristic through ``(x, t)`` has crossed the control point.  The
    period-index sign ``(-1)**floor(t/2pi)`` agrees with it only at
    ``t = 2k*pi`` or for ``x < 2pi(k+1) - t``; it is reported as its own check.
    """
    worst_cross = worst_period = worst_grid = 0.0
    rho_spread = 0.0
    n = 0
    last = None
    for G, track, t, x, vals in near_target_samples(seed):
        y = x + t
        cross = (-1.0) ** np.floor(y / TWO_PI) * G(np.mod(y, TWO_PI))
        period = (-1.0) ** math.floor(t / TWO_PI) * G(np.mod(y, TWO_PI))
        worst_cross = max(worst_cross, float(np.max(np.abs(vals - cross))))
        worst_period = max(worst_period, float(np.max(np.abs(vals - period))))
        n += x.size
        if track is not last:
            last = track
            rhos = [field_rho(G, "stop-moving")]
            xg = np.linspace(0.0, TWO_PI, 64, endpoint=False) + 0.01
            for k in range(1, 5):
                gk = field_at(track, k * TWO_PI)
                rhos.append(field_rho(gk, "stop-moving"))
                worst_grid = max(worst_grid, float(np.max(np.abs(
                    gk(xg) - (-1.0) ** k * G(xg)))))
            rho_spread = max(rho_spread, max(rhos) - min(rhos))
    return [
        Check("near_target_crossing_sign", 3, worst_cross < 1e-10,
              {"max_residual": worst_cross, "samples": n}),
        Check("near_target_period_boundaries", 3, worst_grid < 1e-10 and rho_spread < 1e-10,
              {"max_residual_at_2k_pi": worst_grid, "rho_spread": rho_spread}),
        Check("near_target_period_sign_generic_t", 3, worst_period < 1e-10,
              {"max_residual": worst_period, "samples": n}),
    ]


@_timed
def check_reach_bound(seed: int) -> list[Check]:
    """From rest, rho(T) <= T for admissible controls; u = 1 attains it at 2*pi."""
    rng = _rng(seed, 4)
    zero = PiecewiseLinear.constant(0.0)
    worst = -math.inf
    for _ in range(100):
        u = random_control(rng, 4 * TWO_PI)
        for T in (TWO_PI, 2 * TWO_PI, 4 * TWO_PI):
            worst = max(worst, field_rho(apply_control(zero, u, T), "stop-moving") - T)
    one = PiecewiseLinear.step([0.0], [1.0], TWO_PI, periodic=False)
    attained = abs(field_rho(apply_control(zero, one, TWO_PI), "stop-moving") - TWO_PI)
    return [
        Check("reach_bound", 4, worst <= 1e-9, {"max_rho_minus_T": worst}),
        Check("reach_bound_attained", 4, attained <= 1e-10, {"abs_error": attained}),
    ]


SHAPE_NS = (4, 8, 16, 32)


def shape_errors(xi: DualVector, Ns=SHAPE_NS) -> np.ndarray:
    lim = limit_support_full(xi)
    return np.array([abs(support_normalized(xi, TWO_PI * N) - lim) for N in Ns])


@_timed
def check_shape(seed: int) -> list[Check]:
    """Normalized support functions approach their limit like 1/N."""
    rng = _rng(seed, 5)
    mono_viol = rate_viol = 0.0
    worst_vec = None
    tables = []
    for i in range(10):
        xi = random_dual(rng, int(rng.integers(1, 9)), reduced=False)
        e = shape_errors(xi)
        tables.append(e.tolist())
        mono_viol = max(mono_viol, float(np.max(np.diff(e))))
        c = SHAPE_NS[0] * e[0]
        viol = float(np.max(e - c / np.array(SHAPE_NS)))
        if viol > rate_viol:
            rate_viol, worst_vec = viol, i
    exact = 0.0
    for _ in range(10):
        xi = random_dual(rng, int(rng.integers(1, 9)), reduced=False)
        drift_free = DualVector(np.concatenate([[0.0], xi.phi[1:]]), xi.psi)
        red = xi.reduced()
        lim_full = limit_support_full(drift_free)
        lim_red = limit_support_reduced(red)
        for N in range(1, 33):
            T = TWO_PI * N
            exact = max(exact, abs(support_normalized(drift_free, T) - lim_full),
                        abs(support_reduced(red, T) / T - lim_red))
    return [
        Check("shape_monotone", 5, mono_viol <= 1e-12, {"max_increase": mono_viol},
              {"errors": tables}),
        Check("shape_rate_c_over_N", 5, rate_viol <= 1e-12,
              {"max_excess_over_c_over_N": rate_viol},
              {"worst_vector": worst_vec, "errors": tables}),
        Check("shape_exact_drift_free", 5, exact <= 1e-8, {"max_abs_error": exact}),
    ]


@_timed
def check_duality(seed: int) -> list[Check]:
    """The extremal state attains the gauge inequality; random pairs respect it."""
    rng = _rng(seed, 6)
    gap = 0.0
    for _ in range(20):
        xi = random_dual(rng, int(rng.integers(1, 9)))
        f = extremal_state(xi)
        lhs = pairing(f, xi)
        rhs = field_rho(f.g, "stop-moving") * limit_support_reduced(xi)
        gap = max(gap, abs(lhs - rhs) / abs(rhs))
    excess = -math.inf
    for i in range(1000):
        problem = ("stop-moving", "damping")[i % 2]
        f = StringState.from_field(random_field(rng, n_breaks=8, continuous=bool(i % 3)))
        xi = random_dual(rng, int(rng.integers(1, 9)))
        bound = field_rho(f.g, problem) * limit_support_reduced(xi)
        excess = max(excess, (pairing(f, xi) - bound * (1 + 1e-8)) / max(bound, 1e-300))
    return [
        Check("duality_attained", 6, gap <= 1e-6, {"max_relative_gap": gap}),
        Check("duality_inequality", 6, excess <= 0.0, {"max_relative_excess": excess}),
    ]


@_timed
def check_secular(seed: int) -> list[Check]:
    """Truncated roots against closed forms and their approach to the half-integers."""
    r1 = abs(secular_roots(1)[0] - 1 / math.sqrt(3))
    d = math.sqrt(145.0)
    oracle = np.sqrt([(15 - d) / 10, (15 + d) / 10])
    r2 = float(np.max(np.abs(secular_roots(2) - oracle)))
    Ns = (10, 20, 40, 80)
    gaps = np.array([[abs(secular_roots(N)[k] - (k + 0.5)) for N in Ns] for k in range(3)])
    mono = bool(np.all(np.diff(gaps, axis=1) < 0))
    return [
        Check("secular_N1", 7, r1 <= 1e-12, {"abs_error": r1}),
        Check("secular_N2", 7, r2 <= 1e-12, {"abs_error": r2}),
        Check("secular_gaps_decrease", 7, mono, {"gaps": gaps.tolist()}),
    ]


@_timed
def check_singular(seed: int) -> list[Check]:
    """Half-integer controls are antiperiodic with vanishing averaged trace."""
    rng = _rng(seed, 8)
    t = np.linspace(0.0, 2 * TWO_PI, 512, endpoint=False)
    x = np.linspace(0.0, TWO_PI, 32, endpoint=False)
    anti = bnd = 0.0
    ok = True
    for _ in range(10):
        S = random_half_integer_set(rng, int(rng.integers(1, 7)), rng.uniform(0.1, 1.0))
        rep = singular_field_check(S, t, x)
        anti = max(anti, rep.antiperiodic_residual)
        bnd = max(bnd, rep.boundary_residual)
        ok = ok and rep.admissible
    rejected = 0
    for mu in ([1.0], [0.5, 2.0], [1.5, 3.0, 4.5]):
        try:
            singular_field_check(SpectralSet(mu, np.ones(len(mu)) / len(mu)), t)
        except ValueError:
            rejected += 1
    return [
        Check("singular_identities", 8, ok and anti < 1e-10 and bnd < 1e-10,
              {"antiperiodic_residual": anti, "boundary_residual": bnd, "admissible": ok}),
        Check("singular_rejects_integer_modes", 8, rejected == 3, {"rejected": rejected, "of": 3}),
    ]


@_timed
def check_energy(seed: int) -> list[Check]:
    """The energy of the difference of two flows never increases (empirical)."""
    rng = _rng(seed, 9)
    times = np.linspace(0.0, 4 * TWO_PI, 33)
    worst, offender = -math.inf, None
    for i in range(50):
        G1 = random_field(rng, 10, sup=rng.uniform(0.2, 3.0), continuous=bool(i % 2))
        G2 = random_field(rng, 10, sup=rng.uniform(0.2, 3.0), continuous=True)
        rep = contraction_series(G1, G2, times)
        if rep.max_uptick > worst:
            worst = rep.max_uptick
            if worst > 1e-10:
                offender = {"pair": i, "G1": G1.to_text(), "G2": G2.to_text()}
    return [Check("energy_contraction", 9, worst <= 1e-10, {"max_uptick": worst},
                  {"offending_pair": offender})]


def alternating_oracle(mu: float, K: int = 20000) -> float:
    """``sum (-1)^k/(k^2-mu^2) - 1/(2mu^2)`` by averaging consecutive partial sums."""
    k = np.arange(1, K + 2, dtype=float)
    partial = np.cumsum((-1.0) ** k / (k * k - mu * mu))
    return 0.5 * (partial[-1] + partial[-2]) - 0.5 / (mu * mu)


@_timed
def check_kernel(seed: int) -> list[Check]:
    """Cosine-series kernel at mu = 1/2 against closed values; stated-form ratio logged."""
    at0 = eisenstein_kernel(0.5, 0.0)
    atpi = eisenstein_kernel(0.5, math.pi)
    oracle = alternating_oracle(0.5)
    return [
        Check("kernel_at_zero", 10, abs(at0.lhs) <= 1e-8, {"lhs": at0.lhs}),
        Check("kernel_at_pi", 10, abs(atpi.lhs + math.pi) <= 1e-6
              and abs(oracle + math.pi) <= 1e-6,
              {"lhs": atpi.lhs, "oracle": oracle},
              {"rhs_stated": atpi.rhs_stated, "ratio": atpi.ratio}),
    ]


SUITES: dict[str, tuple[Callable[[int], list[Check]], ...]] = {
    "decay": (check_decay_law, check_optimal_rate, check_reach_bound),
    "near-target": (check_near_target,),
    "duality": (check_duality,),
    "shape": (check_shape,),
    "spectral": (check_secular, check_singular, check_kernel),
    "energy": (check_energy,),
}
SUITES["all"] = tuple(fn for name in ("decay", "near-target", "shape", "duality",
                                      "spectral", "energy") for fn in SUITES[name])


def run_suite(suite: str, seed: int = DEFAULT_SEED) -> list[Check]:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; expected one of {sorted(SUITES)}")
    out = []
    for fn in SUITES[suite]:
        out.extend(fn(seed))
    return out


def report(suite: str, seed: int, checks: list[Check]) -> str:
    doc = {"suite": suite, "seed": seed, "passed": all(c.passed for c in checks),
           "checks": [asdict(c) for c in checks]}
    return json.dumps(doc, indent=2, default=float) + "\n"
