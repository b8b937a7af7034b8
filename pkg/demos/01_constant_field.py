"""A constant field is stopped in two periods.

Start from g = 2 everywhere.  On the first period the boundary value sits
above 1/2, the control saturates at -1 and the field drops by one; the second
period repeats this, and on the third there is nothing left to damp.
"""

import math

import numpy as np

from stringdamp import PiecewiseLinear, decay_report, flow_map, solve_track

G = PiecewiseLinear.constant(2.0)
track = solve_track(G, 3 * 2 * math.pi - 1e-3)

for iv in track.intervals:
    print(f"period {iv.m}: rhs = {iv.rhs(1.0):+.2f}  phi = {iv.phi(1.0):+.2f}  "
          f"control = {-iv.v(1.0):+.2f}")

x = np.linspace(0.0, 2 * math.pi, 7, endpoint=False)
for t in (0.0, math.pi, 2 * math.pi, 3 * math.pi, 4 * math.pi):
    print(f"t = {t:5.2f}  g = {np.round(flow_map(G, t)(x), 3)}")

rep = decay_report(G, 4 * math.pi)
print(f"rho: {rep.rho0:.4f} -> {rep.rhoT:.4f}, mean rate {rep.rate:.12f}")
