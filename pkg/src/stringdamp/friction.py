"""The dry-friction flow, computed by breakpoint algebra.

Under the feedback ``u = -sign g(0, t)`` the field ``g = df0/dx + f1`` obeys a
transport equation with a point source at ``x = 0``.  Its boundary history
``phi(t) = g(0, t)`` is found one period at a time: on period ``m`` it solves

    phi_m + v_m / 2 = G - sum_{j<m} v_j,      v_m in sign(phi_m),

which is a soft threshold at 1/2 applied to a piecewise-linear right-hand
side.  The field at any time is then rebuilt from ``G`` and the control along
characteristics.  No spatial grid is involved.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .pwlin import TWO_PI, PiecewiseLinear, concatenate, refine_crossings
from .reach import check_problem, field_rho

#: Absolute tolerance of the a priori control bound.
CONTROL_TOL = 1e-12


def scalar_resolvent(y: float) -> tuple[float, float]:
    """Solve ``phi + v/2 = y`` with ``v in sign(phi)``, ``sign(0) = [-1, 1]``."""
    if y > 0.5:
        return y - 0.5, 1.0
    if y < -0.5:
        return y + 0.5, -1.0
    return 0.0, 2.0 * y


def pw_resolvent(rhs: PiecewiseLinear) -> tuple[PiecewiseLinear, PiecewiseLinear]:
    """Apply :func:`scalar_resolvent` to a piecewise-linear right-hand side.

    After splitting at the crossings of ``+-1/2`` every segment sits in one
    branch, picked by its midpoint.  Segments lying exactly on ``+-1/2`` fall
    in the dead zone and get ``v = +-1``, ``phi = 0``.
    """
    r = refine_crossings(rhs, 0.5)
    mid = r.values + 0.5 * r.slopes * (r.ends - r.breakpoints)
    up, down = mid > 0.5, mid < -0.5
    dead = ~(up | down)
    phi_v = np.where(up, r.values - 0.5, np.where(down, r.values + 0.5, 0.0))
    phi_s = np.where(dead, 0.0, r.slopes)
    v_v = np.where(up, 1.0, np.where(down, -1.0, 2.0 * r.values))
    v_s = np.where(dead, 2.0 * r.slopes, 0.0)
    phi = PiecewiseLinear(r.breakpoints, phi_v, phi_s, r.domain_length, r.periodic)
    v = PiecewiseLinear(r.breakpoints, v_v, v_s, r.domain_length, r.periodic)
    return phi, v


@dataclass(frozen=True)
class TrackInterval:
    """One period ``[2*pi*m, 2*pi*(m+1))`` of the boundary history, in local time."""

    m: int
    phi: PiecewiseLinear
    v: PiecewiseLinear
    rhs: PiecewiseLinear


@dataclass(frozen=True)
class PhiTrack:
    """Solved boundary history ``phi`` with sign-values ``v``; the control is ``-v``."""

    G: PiecewiseLinear
    intervals: tuple[TrackInterval, ...]
    horizon: float

    @property
    def n_intervals(self) -> int:
        return len(self.intervals)

    def _locate(self, t: float) -> tuple[int, float]:
        if not 0.0 <= t < self.n_intervals * TWO_PI:
            raise ValueError(f"t={t} outside the solved range")
        m = min(int(t // TWO_PI), self.n_intervals - 1)
        return m, t - m * TWO_PI

    def phi_at(self, t: float) -> float:
        m, s = self._locate(t)
        return self.intervals[m].phi(s)

    def phi_sign_value(self, t: float) -> float:
        m, s = self._locate(t)
        return self.intervals[m].v(s)

    def control(self) -> PiecewiseLinear:
        """The feedback control ``u = -v`` as one function on ``[0, 2*pi*M]``."""
        pieces = [(-iv.v).window(0.0, TWO_PI, periodic=False) for iv in self.intervals]
        return concatenate(pieces)

    def residuals(self, samples: int = 257) -> dict:
        """Worst violations of the defining identities at off-breakpoint samples."""
        s = (np.arange(samples) + 0.5) / samples * TWO_PI
        G = self.G(s)
        acc = np.zeros_like(s)
        out = {"identity": 0.0, "v_bound": 0.0, "sign": 0.0, "phi_bound": 0.0}
        for iv in self.intervals:
            phi, v = iv.phi(s), iv.v(s)
            out["identity"] = max(out["identity"], float(np.max(np.abs(phi + 0.5 * v + acc - G))))
            out["v_bound"] = max(out["v_bound"], float(np.max(np.abs(v)) - 1.0))
            nz = phi != 0.0
            if np.any(nz):
                out["sign"] = max(out["sign"], float(np.max(np.abs(v[nz] - np.sign(phi[nz])))))
            out["phi_bound"] = max(out["phi_bound"], float(np.max(np.abs(phi) - np.abs(G))))
            acc = acc + v
        for iv in self.intervals:
            out["v_bound"] = max(out["v_bound"], float(np.max(np.abs(iv.v.values)) - 1.0),
                                 float(np.max(np.abs(iv.v.right_limits)) - 1.0))
        return out


def n_periods(t: float) -> tuple[int, float]:
    """Split ``t = 2*pi*m + s`` with ``0 <= s < 2*pi`` (tiny ``s`` snaps to 0)."""
    m = int(math.floor(t / TWO_PI + 1e-12))
    s = t - m * TWO_PI
    if s < 1e-12:
        s = 0.0
    return m, s


def _check_field(G: PiecewiseLinear):
    if not G.periodic or abs(G.domain_length - TWO_PI) > 1e-12:
        raise ValueError("initial field must be 2*pi-periodic")


def solve_track(G: PiecewiseLinear, horizon: float) -> PhiTrack:
    """Boundary history over the whole periods covering ``[0, horizon]``."""
    _check_field(G)
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    m, s = n_periods(horizon)
    count = m + (1 if s > 0 else 0)
    rhs = G
    intervals = []
    for k in range(count):
        phi, v = pw_resolvent(rhs)
        intervals.append(TrackInterval(k, phi.simplify(), v.simplify(), rhs))
        rhs = (rhs - v).simplify()
    return PhiTrack(G, tuple(intervals), float(horizon))


def control_of(track: PhiTrack, t: float) -> float:
    """Feedback control ``u(t) = -v_m(t - 2*pi*m)``."""
    if not 0.0 <= t < track.horizon:
        raise ValueError(f"t={t} outside [0, horizon)")
    return -track.phi_sign_value(t)


def _period_slice(u: PiecewiseLinear, j: int, upto: float) -> PiecewiseLinear:
    """``y -> u(2*pi*j + y)`` on the torus, zero for ``y >= upto``."""
    a = j * TWO_PI
    b = a + min(upto, TWO_PI)
    b = min(b, u.domain_length)
    return u.window(a, b, periodic=True, length=TWO_PI)


def reconstruct(G: PiecewiseLinear, u: PiecewiseLinear, t: float) -> PiecewiseLinear:
    """Field at time ``t`` along characteristics.

    ``g(z, t) = G(z + t) + sum u(tau)`` over ``tau`` in ``[0, t)`` with
    ``tau = z + t (mod 2*pi)``.  In the variable ``y = z + t`` this is a sum
    of period slices of ``u``, followed by one shift.
    """
    _check_field(G)
    if t < 0:
        raise ValueError("negative time")
    if t > 0 and u.domain_length < t - 1e-12:
        raise ValueError("control is not defined on the whole of [0, t]")
    m, s = n_periods(t)
    H = G
    for j in range(m):
        H = H + _period_slice(u, j, TWO_PI)
    if s > 0:
        H = H + _period_slice(u, m, s)
    return H.simplify().shift(t) if t > 0 else H


def field_at(track: PhiTrack, t: float) -> PiecewiseLinear:
    """Field at time ``t`` rebuilt from a solved boundary history."""
    m, s = n_periods(t)
    if t < 0 or m + (s > 0) > track.n_intervals:
        raise ValueError(f"t={t} outside the solved range")
    H = track.G
    for iv in track.intervals[:m]:
        H = H - iv.v
    if s > 0:
        H = H - track.intervals[m].v.masked(0.0, s)
    return H.simplify().shift(t) if t > 0 else H


def flow_map(G: PiecewiseLinear, t: float) -> PiecewiseLinear:
    """The dry-friction flow ``Phi_t(G)``."""
    _check_field(G)
    if t < 0:
        raise ValueError("negative time")
    if t == 0:
        return G
    return field_at(solve_track(G, t), t)


def apply_control(G: PiecewiseLinear, u: PiecewiseLinear, T: float) -> PiecewiseLinear:
    """Field at time ``T`` under an open-loop control ``u`` on ``[0, T]``."""
    bound = max(np.max(np.abs(u.values)), np.max(np.abs(u.right_limits)))
    if bound > 1.0 + CONTROL_TOL:
        raise ValueError(f"control bound violated: max |u| = {bound!r}")
    return reconstruct(G, u, T)


def random_field(rng: np.random.Generator, n_breaks: int = 12, sup: float | None = None,
                 continuous: bool = True) -> PiecewiseLinear:
    """Random torus field on seeded breakpoints, optionally rescaled to a given sup norm."""
    xs = np.sort(rng.uniform(0.0, TWO_PI, n_breaks - 1))
    xs = np.concatenate([[0.0], xs])
    ys = rng.uniform(-1.0, 1.0, n_breaks)
    if continuous:
        f = PiecewiseLinear.from_points(xs, ys)
    else:
        f = PiecewiseLinear(xs, ys, rng.uniform(-1.0, 1.0, n_breaks))
    if sup is not None:
        f = f * (sup / f.sup_norm())
    return f


def random_control(rng: np.random.Generator, T: float, n_pieces: int = 40,
                   amplitude: float = 1.0) -> PiecewiseLinear:
    """Seeded piecewise-constant admissible control on ``[0, T]``."""
    xs = np.concatenate([[0.0], np.sort(rng.uniform(0.0, T, n_pieces - 1))])
    xs = np.unique(xs)
    levels = amplitude * rng.uniform(-1.0, 1.0, len(xs))
    return PiecewiseLinear.step(xs, levels, T, periodic=False)


@dataclass
class DecayReport:
    rho0: float
    rhoT: float
    rate: float
    trace: list[tuple[float, float]] = field(default_factory=list)


def decay_report(G: PiecewiseLinear, T: float, problem: str = "stop-moving",
                 u: PiecewiseLinear | None = None) -> DecayReport:
    """``rho`` at multiples of ``2*pi`` and at ``T``, and the mean decay rate.

    Without ``u`` the dry-friction feedback drives the flow; with ``u`` the
    given open-loop control does.
    """
    p = check_problem(problem, allow_complete=False)
    if not T > 0:
        raise ValueError("horizon must be positive")
    m, s = n_periods(T)
    times = [k * TWO_PI for k in range(m + 1)]
    if s > 0:
        times.append(T)
    else:
        times[-1] = T
    track = solve_track(G, T) if u is None else None
    trace = []
    for t in times:
        if t == 0:
            g = G
        elif track is not None:
            g = field_at(track, t)
        else:
            g = apply_control(G, u, t)
        trace.append((t, field_rho(g, p)))
    rho0, rhoT = trace[0][1], trace[-1][1]
    return DecayReport(rho0, rhoT, (rho0 - rhoT) / T, trace)


FLOW_COLUMNS = ("t", "rho", "phi_at_0", "u")


def flow_trace(G: PiecewiseLinear, T: float, stride: float,
               problem: str = "stop-moving") -> list[dict]:
    """Rows ``t, rho, phi_at_0, u`` on the grid ``0, stride, ...`` up to ``T``."""
    p = check_problem(problem, allow_complete=False)
    if not stride > 0:
        raise ValueError("stride must be positive")
    # one extra period so that phi and u are defined at t = T as well
    track = solve_track(G, T + 1e-9)
    n = int(math.floor(T / stride + 1e-9))
    rows = []
    for i in range(n + 1):
        t = min(i * stride, T)
        g = G if t == 0 else field_at(track, t)
        rows.append({"t": t, "rho": field_rho(g, p), "phi_at_0": track.phi_at(t),
                     "u": -track.phi_sign_value(t)})
    return rows


def write_flow_csv(rows: Sequence[dict], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FLOW_COLUMNS)
        for r in rows:
            w.writerow([f"{r[c]:.17g}" for c in FLOW_COLUMNS])
