"""Singular arcs: half-integer modes, the truncated eigenproblem and its limit.

On a singular arc the boundary value ``g(0, t)`` vanishes identically and the
feedback is not fixed by the sign alone.  Such motions are built from
frequencies ``mu = k + 1/2``; at cut-off ``N`` the frequencies are instead
the roots of the secular equation

    sum_{k=1..N} 1 / (k^2 - mu^2) = 1 / (2 mu^2),

which approach the half-integers as ``N`` grows.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pwlin import TWO_PI

ADMISSIBLE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpectralSet:
    """Frequencies ``mu > 0`` with complex weights ``R_mu``.

    Only positive frequencies are stored; ``R_{-mu} = conj(R_mu)`` is implied.
    ``N`` records the cut-off for finite-truncation experiments.
    """

    mu: np.ndarray
    R: np.ndarray
    N: int | None = None

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float).ravel()
        R = np.array(self.R, dtype=complex).ravel()
        if mu.shape != R.shape:
            raise ValueError("mu and R must have the same length")
        if np.any(mu <= 0) or np.any(np.diff(mu) <= 0):
            raise ValueError("frequencies must be positive and strictly increasing")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "R", R)

    @classmethod
    def empty(cls):
        return cls([], [])

    def __len__(self):
        return len(self.mu)

    def signal(self, t):
        """``sum_mu Re(R_mu exp(i mu t))``."""
        t = np.asarray(t, dtype=float)
        if len(self) == 0:
            return np.zeros_like(t)
        return np.real(np.exp(1j * np.multiply.outer(t, self.mu)) @ self.R)

    def is_half_integer(self, tol: float = 1e-12) -> bool:
        twice = 2.0 * self.mu
        odd = np.round(twice)
        return bool(np.all(np.abs(twice - odd) <= tol) and np.all(odd % 2 == 1))

    def to_text(self) -> str:
        return "".join(f"{m:.17g},{r.real:.17g},{r.imag:.17g}\n" for m, r in zip(self.mu, self.R))

    @classmethod
    def from_text(cls, text: str) -> "SpectralSet":
        rows = [r.strip() for r in text.splitlines() if r.strip() and not r.startswith("#")]
        data = np.array([[float(x) for x in r.split(",")] for r in rows]).reshape(-1, 3)
        return cls(data[:, 0], data[:, 1] + 1j * data[:, 2])


def secular_function(t: float, N: int) -> float:
    """``sum_{k<=N} 1/(k^2 - t) - 1/(2t)`` on the ``t = mu^2`` axis."""
    k2 = np.arange(1, N + 1, dtype=float) ** 2
    return float(np.sum(1.0 / (k2 - t)) - 0.5 / t)


def secular_roots(N: int) -> np.ndarray:
    """The ``N`` positive roots ``mu_0 < ... < mu_{N-1}`` of the truncated secular equation.

    On ``t = mu^2`` the secular function increases strictly between its poles
    ``0, 1, 4, ..., N^2`` and runs from ``-inf`` to ``+inf`` on each gap, so
    bisection on every gap ``(k^2, (k+1)^2)`` finds exactly one root; nothing
    lies beyond ``N^2``.
    """
    if int(N) != N or N < 1:
        raise ValueError("N must be a positive integer")
    N = int(N)
    k2 = np.arange(1, N + 1, dtype=float) ** 2
    out = np.empty(N)
    for k in range(N):
        lo, hi = float(k * k), float((k + 1) ** 2)
        while True:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi or hi - lo <= 1e-13 * max(1.0, mid):
                break
            val = np.sum(1.0 / (k2 - mid)) - 0.5 / mid
            if val > 0:
                hi = mid
            else:
                lo = mid
        out[k] = math.sqrt(0.5 * (lo + hi))
    return out


def limit_roots(count: int) -> np.ndarray:
    """Half-integers ``1/2, 3/2, ..., count - 1/2``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return np.arange(count) + 0.5


@dataclass(frozen=True)
class KernelValue:
    lhs: float
    rhs_stated: float
    tail_bound: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs_stated if self.rhs_stated != 0 else math.nan


def _mu_norm(y: float, mu: float) -> float:
    period = TWO_PI * abs(mu)
    r = math.fmod(abs(y), period)
    return min(r, period - r)


def eisenstein_kernel(mu: float, x: float, K: int = 10**6) -> KernelValue:
    """Truncated cosine series ``sum cos(kx)/(k^2 - mu^2) - 1/(2 mu^2)`` and the closed form
    ``-(1/|mu|) sin ||mu x||_mu`` it is claimed to equal.

    At ``x = 0 (mod 2*pi)`` the tail beyond ``K`` is added through the midpoint
    integral ``(1/2mu) log((K+1/2+mu)/(K+1/2-mu))`` (error ``O(K^-3)``).
    Elsewhere the oscillating tail is ``O(1/(K^2 |sin(x/2)|))`` and is only
    reported as ``tail_bound``.
    """
    if abs(mu - round(mu)) < 1e-12:
        raise ValueError("mu sits on a pole of the series")
    k = np.arange(1, K + 1, dtype=float)
    terms = np.cos(k * x) / (k * k - mu * mu)
    series = float(math.fsum(terms[::-1]))
    s = abs(math.sin(0.5 * x))
    if s < 1e-15:
        a = K + 0.5
        series += math.log((a + abs(mu)) / (a - abs(mu))) / (2 * abs(mu))
        tail = 1.0 / K**3
    else:
        tail = 1.0 / (K * K * s)
    lhs = series - 0.5 / (mu * mu)
    rhs = -math.sin(_mu_norm(mu * x, mu)) / abs(mu)
    return KernelValue(lhs, rhs, tail)


def secular_limit_check(mu: float, K: int = 10**6) -> dict:
    """Compare ``sum 1/(k^2-mu^2) - 1/(2mu^2)`` with ``+(pi/2mu)cot(pi mu)`` and
    with the classical ``-(pi/2mu)cot(pi mu)``."""
    val = eisenstein_kernel(mu, 0.0, K).lhs
    cot = math.cos(math.pi * mu) / math.sin(math.pi * mu)
    return {"series": val, "stated": math.pi / (2 * mu) * cot,
            "classical": -math.pi / (2 * mu) * cot}


def modes_from_spectral(S: SpectralSet, K: int, t: float = 0.0) -> np.ndarray:
    """``a_k(t) = 2 sum_{mu>0} Re(R_mu e^{i mu t}) / (k^2 - mu^2)`` for ``k = 1..K``."""
    if K < 1:
        raise ValueError("K must be >= 1")
    k = np.arange(1, K + 1, dtype=float)
    if len(S) == 0:
        return np.zeros(K)
    if np.any(np.abs(S.mu[:, None] - k[None, :]) < 1e-12):
        raise ValueError("a frequency coincides with an integer mode k <= K")
    w = np.real(S.R * np.exp(1j * S.mu * t))
    return 2.0 * (1.0 / (k[:, None] ** 2 - S.mu[None, :] ** 2)) @ w


def admissibility(S: SpectralSet, t_grid: Sequence[float]) -> tuple[float, bool]:
    """Max of ``|sum Re(R_mu e^{i mu t})|`` over the grid and whether it is ``<= 1/2``."""
    t = np.asarray(t_grid, dtype=float)
    if t.size == 0:
        raise ValueError("empty time grid")
    m = float(np.max(np.abs(S.signal(t)))) if len(S) else 0.0
    return m, m <= 0.5 + ADMISSIBLE_TOL


def finite_admissibility(R: Sequence[complex], N: int, t_grid) -> tuple[float, bool]:
    """Same bound with the weights attached to the truncated roots at cut-off ``N``."""
    R = np.asarray(R, dtype=complex)
    mu = secular_roots(N)[: len(R)]
    return admissibility(SpectralSet(mu, R[: len(mu)], N), t_grid)


@dataclass(frozen=True)
class SingularReport:
    antiperiodic_residual: float
    boundary_residual: float
    max_abs_u: float
    admissible: bool

    @property
    def ok(self) -> bool:
        return (self.admissible and self.antiperiodic_residual < 1e-10
                and self.boundary_residual < 1e-10)


def singular_field_check(S: SpectralSet, t_grid, x_grid=None) -> SingularReport:
    """Check a singular control ``u(t) = sum Re(R_mu e^{i mu t})`` and its field ``g = u(t+x)/2``.

    Verifies ``u(t + 2pi) = -u(t)``, that the two one-sided boundary values
    ``g(0+, t) = u(t)/2`` and ``g(2pi-, t) = u(t+2pi)/2`` average to zero, and
    ``|u| <= 1`` on the grid (extended by ``x_grid`` shifts when given).
    """
    if not S.is_half_integer():
        raise ValueError("singular controls must use half-integer frequencies")
    t = np.asarray(t_grid, dtype=float)
    u = S.signal(t)
    u_next = S.signal(t + TWO_PI)
    anti = float(np.max(np.abs(u_next + u))) if t.size else 0.0
    g_left = 0.5 * u
    g_right = 0.5 * u_next
    bnd = float(np.max(np.abs(0.5 * (g_left + g_right)))) if t.size else 0.0
    vals = [np.abs(u)]
    if x_grid is not None:
        x = np.asarray(x_grid, dtype=float)
        vals.append(np.abs(S.signal(np.add.outer(t, x).ravel())))
    m = float(max(v.max() for v in vals)) if t.size else 0.0
    return SingularReport(anti, bnd, m, m <= 1.0 + ADMISSIBLE_TOL)


def random_half_integer_set(rng: np.random.Generator, modes: int = 4,
                            amplitude: float = 1.0) -> SpectralSet:
    """Seeded half-integer control with ``sum |R_mu| = amplitude``."""
    mu = limit_roots(modes)
    R = rng.standard_normal(modes) + 1j * rng.standard_normal(modes)
    R *= amplitude / np.sum(np.abs(R))
    return SpectralSet(mu, R)


SECULAR_COLUMNS = ("N", "k", "mu_N", "mu_limit", "gap")


def secular_table(Ns: Sequence[int], ks: Sequence[int] | None = None) -> list[dict]:
    rows = []
    for N in Ns:
        roots = secular_roots(N)
        for k in (range(N) if ks is None else [k for k in ks if k < N]):
            lim = k + 0.5
            rows.append({"N": N, "k": k, "mu_N": roots[k], "mu_limit": lim,
                         "gap": abs(roots[k] - lim)})
    return rows


def write_secular_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SECULAR_COLUMNS)
        for r in rows:
            w.writerow([r["N"], r["k"], f"{r['mu_N']:.17g}", f"{r['mu_limit']:.17g}",
                        f"{r['gap']:.17g}"])
