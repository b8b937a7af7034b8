"""Support functions of reachable sets, the dual gauge rho, and duality checks.

Three terminal manifolds are distinguished::

    complete-stop   C = 0
    stop-moving     C = R x 0
    damping         C = R^2

Support functions come in finite-horizon, normalized and limiting forms.  The
gauge ``rho`` is ``2*pi`` times a sup-type norm of ``g = df0/dx + f1`` and is
only available for the last two problems.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .duals import DualProfile, DualVector, TrigLine, zeta_profile
from .pwlin import TWO_PI, PiecewiseLinear, even_odd_parts, sup_norm

PROBLEMS = ("complete-stop", "stop-moving", "damping")

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(16)


def check_problem(problem: str, allow_complete: bool = True) -> str:
    p = str(problem).strip().lower().replace("_", "-")
    if p not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}; expected one of {PROBLEMS}")
    if p == "complete-stop" and not allow_complete:
        raise ValueError("no dual gauge is available for the complete-stop problem")
    return p


@dataclass(frozen=True)
class ReachQuery:
    problem: str
    horizon: float

    def __post_init__(self):
        object.__setattr__(self, "problem", check_problem(self.problem))
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")

    def support(self, xi: DualVector) -> float:
        if self.problem == "complete-stop":
            return support_full(xi, self.horizon)
        return support_reduced(xi, self.horizon)


@dataclass(frozen=True, eq=False)
class StringState:
    """Even string state, kept through ``df0 = df0/dx`` (odd) and ``f1`` (even).

    Piecewise-linear ``g`` makes ``f0`` piecewise quadratic, so the slope field
    is what is stored; :attr:`f0` rebuilds the displacement (zero mean) when it
    is piecewise linear.
    """

    df0: PiecewiseLinear
    f1: PiecewiseLinear

    def __post_init__(self):
        self.df0._same_domain(self.f1)
        if not self.df0.periodic or abs(self.df0.domain_length - TWO_PI) > 1e-12:
            raise ValueError("states live on the 2*pi torus")

    @property
    def g(self) -> PiecewiseLinear:
        return self.df0 + self.f1

    @property
    def f0(self) -> PiecewiseLinear:
        return self.df0.antiderivative(zero_mean=True)

    @classmethod
    def from_displacement(cls, f0: PiecewiseLinear, f1: PiecewiseLinear,
                          tol: float = 1e-12) -> "StringState":
        """State from a continuous piecewise-linear displacement and a velocity."""
        jumps = f0.values - np.roll(f0.right_limits, 1)
        if np.max(np.abs(jumps)) > tol:
            raise ValueError("displacement f0 must be continuous")
        return cls(f0.derivative(), f1)

    @classmethod
    def from_field(cls, g: PiecewiseLinear) -> "StringState":
        """State whose ``g`` is the given field: ``f1`` = even part, ``df0`` = odd part."""
        even, odd = even_odd_parts(g)
        return cls(odd, even)

    def scaled(self, lam: float) -> "StringState":
        return StringState(lam * self.df0, lam * self.f1)


# -- support functions ------------------------------------------------------

def _positive(T):
    if not T > 0:
        raise ValueError("horizon must be positive")


def support_full(xi: DualVector, T: float) -> float:
    """``int_0^T |trace(t)| dt``: support function of the reachable set D(T)."""
    _positive(T)
    return xi.trace_line().abs_integral(0.0, T)


def support_reduced(xi: DualVector, T: float) -> float:
    """Support function of the reachable set in the space modulo constants."""
    xi.require_reduced()
    _positive(T)
    return xi.trace_line().abs_integral(0.0, T)


def support_normalized(xi: DualVector, T: float) -> float:
    """Support function of ``C(T) D(T)``: drift rescaled by ``1/T``, mean over ``[0, T]``."""
    _positive(T)
    return xi.trace_line(drift_scale=1.0 / T).abs_integral(0.0, T) / T


def _abs_mean_over_tau(a, b):
    """``int_0^1 |a + b*tau| dtau`` for arrays ``a`` and scalar ``b``."""
    a = np.asarray(a, dtype=float)
    if b == 0.0:
        return np.abs(a)
    c = a + b
    same = a * c >= 0
    out = np.empty_like(a)
    out[same] = np.abs(a[same] + 0.5 * b)
    out[~same] = (a[~same] ** 2 + c[~same] ** 2) / (2.0 * abs(b))
    return out


def limit_support_full(xi: DualVector) -> float:
    """Limit of :func:`support_normalized` as ``T -> inf``.

    The drift integral over ``tau`` is done in closed form; the remaining
    ``t`` integral is split where the periodic part crosses ``0`` or
    ``-phi_0`` (the kinks of the inner integral) and each smooth piece gets
    16-point Gauss-Legendre panels.
    """
    per = xi.trace_line(drift_scale=0.0)
    b = float(xi.phi[0])
    cuts = [per.roots(0.0, TWO_PI)]
    if b != 0.0:
        cuts.append(per.roots(0.0, TWO_PI, level=-b))
    nodes = np.unique(np.concatenate([[0.0, TWO_PI], *cuts]))
    max_panel = TWO_PI / (4 * (per.order + 1))
    total = 0.0
    for lo, hi in zip(nodes[:-1], nodes[1:]):
        k = max(int(np.ceil((hi - lo) / max_panel)), 1)
        edges = np.linspace(lo, hi, k + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        ts = (mid[:, None] + half[:, None] * _GAUSS_X[None, :]).ravel()
        ws = (half[:, None] * _GAUSS_W[None, :]).ravel()
        total += float(ws @ _abs_mean_over_tau(per(ts), b))
    return total / TWO_PI


def limit_support_reduced(xi: DualVector | DualProfile) -> float:
    """``(1/2pi) int_0^{2pi} |zeta|``: support function of the limit body Omega."""
    if isinstance(xi, DualProfile):
        zeta = xi.zeta
        if zeta.c1 != 0.0:
            raise ValueError("profile must be periodic (no drift)")
    else:
        xi.require_reduced()
        zeta = xi.trace_line()
    return zeta.abs_integral(0.0, TWO_PI) / TWO_PI


def l1_parts_symmetric(xi: DualVector, T: float) -> tuple[float, float, float]:
    """``(||f||_1, ||f+||_1, ||f-||_1)`` over ``[-T/2, T/2]`` for the trace ``f``.

    ``f+`` is the even part (``xi1`` at the boundary) and ``f-`` the odd part
    (``eta``).
    """
    _positive(T)
    prof = zeta_profile(xi)
    lo, hi = -0.5 * T, 0.5 * T
    return (prof.zeta.abs_integral(lo, hi), prof.xi1.abs_integral(lo, hi),
            prof.eta.abs_integral(lo, hi))


# -- the dual gauge ---------------------------------------------------------

def field_rho(g: PiecewiseLinear, problem: str) -> float:
    """``2*pi`` times the sup norm of ``g`` (modulo constants for damping)."""
    p = check_problem(problem, allow_complete=False)
    return TWO_PI * sup_norm(g, quotient_constants=(p == "damping"))


def rho_norm(state: StringState, problem: str) -> float:
    return field_rho(state.g, problem)


def pairing(state: StringState, xi: DualVector | DualProfile) -> float:
    """``int_0^{2pi} (f0*xi0 + f1*xi1) dx`` in closed form.

    ``f0`` is taken with zero mean and the ``xi0`` term is integrated by
    parts, ``int f0 cos(nx) = -(1/n) int df0 sin(nx)``, so only exact trig
    moments of piecewise-linear functions are needed.
    """
    prof = zeta_profile(xi) if isinstance(xi, DualVector) else xi
    x1, eta = prof.xi1, prof.eta
    total = x1.c0 * state.f1.integrate()
    for n in range(1, x1.order + 1):
        if x1.a[n - 1]:
            total += x1.a[n - 1] * state.f1.cos_moment(n)
    for n in range(1, eta.order + 1):
        if eta.b[n - 1]:
            total -= eta.b[n - 1] * state.df0.sin_moment(n)
    # phi_0 pairs with the mean of f0, which is zero by convention
    return float(total)


def sign_profile(zeta: TrigLine) -> PiecewiseLinear:
    """``sign(zeta)`` on the torus as a piecewise-constant function."""
    if zeta.c1 != 0.0:
        raise ValueError("profile must be periodic (no drift)")
    if zeta.is_zero():
        raise ValueError("zeta vanishes identically")
    roots = zeta.roots(0.0, TWO_PI)
    xs = np.unique(np.concatenate([[0.0], roots[roots < TWO_PI - 1e-12]]))
    ends = np.append(xs[1:], TWO_PI)
    levels = np.sign(zeta(0.5 * (xs + ends)))
    return PiecewiseLinear.step(xs, levels).simplify()


def extremal_state(xi: DualVector | DualProfile, problem: str = "stop-moving") -> StringState:
    """State attaining ``<f, xi> = rho(f) * H_Omega(xi)``.

    Takes ``phi* = sign(zeta)`` and sets ``f1 = even(phi*)`` and
    ``df0 = -odd(phi*)``; the minus sign comes from integrating the ``xi0``
    pairing by parts.
    """
    check_problem(problem, allow_complete=False)
    zeta = xi.trace_line() if isinstance(xi, DualVector) else xi.zeta
    phi_star = sign_profile(zeta)
    even, odd = even_odd_parts(phi_star)
    return StringState((-odd).simplify(), even.simplify())


def membership_margin(state: StringState, T: float, sample: Sequence[DualVector],
                      problem: str = "damping") -> float:
    """``max_xi (<f, xi> - H_{D(T)}(xi))`` over a finite sample of duals.

    A positive value certifies that ``state`` is not reachable in time ``T``;
    a nonpositive one is only consistent with reachability.  For the reduced
    problems the zero modes of each sample vector are dropped first.
    """
    q = ReachQuery(problem, T)
    if len(sample) == 0:
        raise ValueError("empty dual sample")
    best = -np.inf
    for xi in sample:
        xi = xi if q.problem == "complete-stop" else xi.reduced()
        best = max(best, pairing(state, xi) - q.support(xi))
    return float(best)


# -- scans ------------------------------------------------------------------

SCAN_COLUMNS = ("T", "H_full", "H_reduced", "H_normalized", "H_limit")


def support_scan(xi: DualVector, horizons: Iterable[float]) -> list[dict]:
    """One row per horizon; ``H_reduced`` uses ``xi`` with its zero modes dropped."""
    red = xi.reduced()
    lim = limit_support_full(xi)
    rows = []
    for T in horizons:
        rows.append({"T": T, "H_full": support_full(xi, T), "H_reduced": support_reduced(red, T),
                     "H_normalized": support_normalized(xi, T), "H_limit": lim})
    return rows


def write_support_scan(rows: Sequence[dict], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SCAN_COLUMNS)
        for r in rows:
            w.writerow([f"{r[c]:.17g}" for c in SCAN_COLUMNS])
