"""Energy functionals and empirical contraction diagnostics for the flow."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .friction import field_at, solve_track
from .pwlin import PiecewiseLinear, integrate

#: Largest energy increase still counted as monotone.
UPTICK_TOL = 1e-10


def energy_first_order(g: PiecewiseLinear) -> float:
    """``(1/2) int_0^{2pi} g^2`` in closed form."""
    if not g.periodic:
        raise ValueError("energy is defined for torus fields")
    return 0.5 * integrate(g, 0.0, g.domain_length, "square")


def energy_second_order(f0_coeffs: Sequence[float], f1_coeffs: Sequence[float]) -> float:
    """``(1/2)||f1||^2 + (1/2)||df0/dx||^2`` for cosine series, by Parseval.

    ``f0_coeffs[n]`` and ``f1_coeffs[n]`` multiply ``cos(n x)``; the constant
    term of ``f0`` does not contribute.
    """
    a = np.asarray(f0_coeffs, dtype=float)
    b = np.asarray(f1_coeffs, dtype=float)
    na = np.arange(len(a))
    kinetic = math.pi * (b[0] ** 2 if len(b) else 0.0) + 0.5 * math.pi * float(np.sum(b[1:] ** 2))
    potential = 0.5 * math.pi * float(np.sum((na * a) ** 2))
    return kinetic + potential


def laplacian_pairings(u: Sequence[float], v: Sequence[float]) -> tuple[float, float]:
    """``(<v, u''>, <v', u'>)`` over ``[0, 2pi]`` for cosine coefficient lists.

    Both are computed term by term; they cancel exactly.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n = min(len(u), len(v))
    k2 = np.arange(n, dtype=float) ** 2
    prod = u[:n] * v[:n]
    return float(-math.pi * np.sum(k2 * prod)), float(math.pi * np.sum(k2 * prod))


@dataclass
class EnergyReport:
    times: np.ndarray
    values: np.ndarray
    monotone: bool
    max_uptick: float

    @property
    def upticks(self) -> np.ndarray:
        return np.concatenate([[0.0], np.diff(self.values)])


def contraction_series(G1: PiecewiseLinear, G2: PiecewiseLinear,
                       times: Sequence[float]) -> EnergyReport:
    """Energy of ``Phi_t(G1) - Phi_t(G2)`` at the given increasing times."""
    t = np.asarray(times, dtype=float)
    if t.size == 0 or np.any(np.diff(t) <= 0) or t[0] < 0:
        raise ValueError("times must be nonnegative and strictly increasing")
    if not (G1.periodic and G2.periodic):
        raise ValueError("both fields must be periodic")
    tmax = float(t[-1])
    tracks = [solve_track(G, tmax) if tmax > 0 else None for G in (G1, G2)]
    vals = []
    for ti in t:
        if ti == 0:
            g1, g2 = G1, G2
        else:
            g1, g2 = (field_at(tr, ti) for tr in tracks)
        vals.append(energy_first_order(g1 - g2))
    vals = np.array(vals)
    up = float(np.max(np.diff(vals))) if len(vals) > 1 else 0.0
    return EnergyReport(t, vals, up <= UPTICK_TOL, up)


ENERGY_COLUMNS = ("t", "E", "uptick")


def write_energy_csv(report: EnergyReport, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ENERGY_COLUMNS)
        for t, e, u in zip(report.times, report.values, report.upticks):
            w.writerow([f"{t:.17g}", f"{e:.17g}", f"{u:.17g}"])
