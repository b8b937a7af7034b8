"""Even dual vectors given by cosine coefficients, and their boundary traces.

A dual vector ``xi = (xi0, xi1)`` is stored through the cosine coefficients
``phi_n`` of ``xi0`` and ``psi_n`` of ``xi1``.  Everything the support
functions need is the scalar trace

    trace(t) = sum_{n>=1} (psi_n cos nt + phi_n/n sin nt) + psi_0 + phi_0 t,

a trigonometric polynomial plus a linear drift, handled here by
:class:`TrigLine`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import elementwise

from .pwlin import TWO_PI

#: Samples per period used to isolate sign changes, per harmonic.
SAMPLES_PER_MODE = 64
ROOT_XTOL = 1e-14


@dataclass(frozen=True, eq=False)
class TrigLine:
    """``c0 + c1*t + sum_n (a_n cos nt + b_n sin nt)`` for ``n = 1..N``."""

    a: np.ndarray
    b: np.ndarray
    c0: float = 0.0
    c1: float = 0.0

    def __post_init__(self):
        a = np.array(self.a, dtype=float).ravel()
        b = np.array(self.b, dtype=float).ravel()
        if a.shape != b.shape:
            raise ValueError("cosine and sine coefficient lengths differ")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def order(self) -> int:
        return len(self.a)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        n = np.arange(1, self.order + 1)
        nt = np.multiply.outer(t, n)
        out = self.c0 + self.c1 * t + np.cos(nt) @ self.a + np.sin(nt) @ self.b
        return float(out) if out.ndim == 0 else out

    def primitive(self, t):
        """Antiderivative vanishing at 0 up to a constant (only differences are used)."""
        t = np.asarray(t, dtype=float)
        n = np.arange(1, self.order + 1)
        nt = np.multiply.outer(t, n)
        out = (self.c0 * t + 0.5 * self.c1 * t * t
               + np.sin(nt) @ (self.a / n) - np.cos(nt) @ (self.b / n))
        return float(out) if out.ndim == 0 else out

    def scaled(self, lam: float) -> "TrigLine":
        return TrigLine(lam * self.a, lam * self.b, lam * self.c0, lam * self.c1)

    def is_zero(self) -> bool:
        return not (np.any(self.a) or np.any(self.b) or self.c0 or self.c1)

    def roots(self, lo: float, hi: float, level: float = 0.0) -> np.ndarray:
        """Sign changes of ``self - level`` inside ``(lo, hi)``.

        The interval is sampled densely (64*(N+1) points per period) and each
        bracketed change is polished with Chandrupatla's method, vectorized.  Tangential zeros
        that do not change sign are not reported.
        """
        if hi <= lo:
            return np.empty(0)
        per_period = SAMPLES_PER_MODE * (self.order + 1)
        m = max(int(math.ceil((hi - lo) / TWO_PI * per_period)), 8) + 1
        ts = np.linspace(lo, hi, m)
        ys = self(ts) - level
        zero = np.flatnonzero(ys[1:-1] == 0.0) + 1
        out = [ts[i] for i in zero if ys[i - 1] * ys[i + 1] < 0]
        idx = np.flatnonzero(ys[:-1] * ys[1:] < 0)
        if idx.size:
            res = elementwise.find_root(lambda t: self(t) - level, (ts[idx], ts[idx + 1]),
                                        tolerances={"xatol": ROOT_XTOL,
                                                    "xrtol": 4 * np.finfo(float).eps})
            out.extend(np.atleast_1d(res.x))
        return np.sort(np.array(out, dtype=float))

    def abs_integral(self, lo: float, hi: float) -> float:
        """``int_lo^hi |self(t)| dt`` via root isolation and exact primitives."""
        if hi < lo:
            raise ValueError("inverted bounds")
        if hi == lo or self.is_zero():
            return 0.0
        nodes = np.concatenate([[lo], self.roots(lo, hi), [hi]])
        F = self.primitive(nodes)
        return float(np.sum(np.abs(np.diff(F))))


@dataclass(frozen=True, eq=False)
class DualVector:
    """Cosine coefficients ``phi`` (of xi0) and ``psi`` (of xi1), index 0..N."""

    phi: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        phi = np.array(self.phi, dtype=float).ravel()
        psi = np.array(self.psi, dtype=float).ravel()
        n = max(len(phi), len(psi), 1)
        phi = np.pad(phi, (0, n - len(phi)))
        psi = np.pad(psi, (0, n - len(psi)))
        if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(psi))):
            raise ValueError("coefficients must be finite reals")
        phi.setflags(write=False)
        psi.setflags(write=False)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "psi", psi)

    @classmethod
    def from_modes(cls, N: int, phi: dict | None = None, psi: dict | None = None):
        """Build from sparse ``{n: value}`` maps, e.g. ``from_modes(1, psi={1: 1.0})``."""
        p = np.zeros(N + 1)
        q = np.zeros(N + 1)
        for n, val in (phi or {}).items():
            p[n] = val
        for n, val in (psi or {}).items():
            q[n] = val
        return cls(p, q)

    @property
    def N(self) -> int:
        return len(self.phi) - 1

    @property
    def is_reduced(self) -> bool:
        return self.phi[0] == 0.0 and self.psi[0] == 0.0

    def require_reduced(self):
        if not self.is_reduced:
            raise ValueError("reduced support functions need phi_0 = psi_0 = 0")

    def reduced(self) -> "DualVector":
        """Copy with the zero modes dropped."""
        phi, psi = self.phi.copy(), self.psi.copy()
        phi[0] = psi[0] = 0.0
        return DualVector(phi, psi)

    def __mul__(self, lam):
        return DualVector(lam * self.phi, lam * self.psi)

    __rmul__ = __mul__

    def __add__(self, other: "DualVector"):
        n = max(len(self.phi), len(other.phi))
        pad = lambda a: np.pad(a, (0, n - len(a)))  # noqa: E731
        return DualVector(pad(self.phi) + pad(other.phi), pad(self.psi) + pad(other.psi))

    def trace_line(self, drift_scale: float = 1.0) -> TrigLine:
        """Boundary trace as a :class:`TrigLine`; the drift is ``phi_0*drift_scale``."""
        n = np.arange(1, self.N + 1)
        return TrigLine(self.psi[1:], self.phi[1:] / n, self.psi[0], self.phi[0] * drift_scale)

    def xi0(self, x):
        x = np.asarray(x, dtype=float)
        return np.cos(np.multiply.outer(x, np.arange(self.N + 1))) @ self.phi

    def xi1(self, x):
        x = np.asarray(x, dtype=float)
        return np.cos(np.multiply.outer(x, np.arange(self.N + 1))) @ self.psi

    def to_text(self) -> str:
        lines = [f"#dual N={self.N}"]
        lines += [f"{n},{p:.17g},{q:.17g}" for n, (p, q) in enumerate(zip(self.phi, self.psi))]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DualVector":
        rows = [r.strip() for r in text.splitlines() if r.strip()]
        if not rows or not rows[0].startswith("#dual"):
            raise ValueError("missing '#dual' header")
        N = int(rows[0].split("N=", 1)[1])
        phi = np.zeros(N + 1)
        psi = np.zeros(N + 1)
        for r in rows[1:]:
            n, p, q = r.split(",")
            phi[int(n)], psi[int(n)] = float(p), float(q)
        return cls(phi, psi)


@dataclass(frozen=True, eq=False)
class DualProfile:
    """The profile ``zeta = xi1 + eta`` with ``eta(t) = int_0^t xi0``.

    ``zeta``, ``eta`` and ``xi1`` are coefficient-backed :class:`TrigLine`
    objects, so they can be evaluated, integrated and root-isolated exactly.
    """

    zeta: TrigLine
    eta: TrigLine
    xi1: TrigLine

    @property
    def drift(self) -> float:
        return self.zeta.c1

    @classmethod
    def from_trace(cls, zeta: TrigLine) -> "DualProfile":
        """Profile given directly by its trace; cosines go to ``xi1``, the rest to ``eta``."""
        even = TrigLine(zeta.a, np.zeros_like(zeta.b), zeta.c0, 0.0)
        odd = TrigLine(np.zeros_like(zeta.a), zeta.b, 0.0, zeta.c1)
        return cls(zeta, odd, even)


def boundary_trace(xi: DualVector, t):
    """Value at ``x = 0`` of the adjoint wave started from ``xi``, at time ``t``."""
    return xi.trace_line()(t)


def zeta_profile(xi: DualVector) -> DualProfile:
    """Split the trace of ``xi`` into its even part ``xi1`` and odd part ``eta``."""
    n = np.arange(1, xi.N + 1)
    zero = np.zeros(xi.N)
    xi1 = TrigLine(xi.psi[1:], zero, xi.psi[0], 0.0)
    eta = TrigLine(zero, xi.phi[1:] / n, 0.0, xi.phi[0])
    return DualProfile(xi.trace_line(), eta, xi1)


def random_dual(rng: np.random.Generator, N: int, reduced: bool = True,
                scale: Callable[[np.ndarray], np.ndarray] | None = None) -> DualVector:
    """Gaussian coefficients on modes ``0..N`` (zero modes dropped if ``reduced``)."""
    phi = rng.standard_normal(N + 1)
    psi = rng.standard_normal(N + 1)
    if scale is not None:
        phi, psi = scale(phi), scale(psi)
    if reduced:
        phi[0] = psi[0] = 0.0
    return DualVector(phi, psi)
