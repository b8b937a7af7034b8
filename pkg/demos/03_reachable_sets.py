"""Support functions of the reachable sets and their limit shape.

For a dual vector the support function of the set reached in time T grows
like T; divided by T it settles to the support function of a limit body.
The error decays like 1/N at T = 2*pi*N, and vanishes outright when the dual
vector carries no drift.
"""

import math

import numpy as np

from stringdamp import (DualVector, extremal_state, field_rho, limit_support_full,
                        limit_support_reduced, pairing, support_normalized)

xi = DualVector([0.4, 1.0, -0.3], [0.2, 0.5, 0.8])
lim = limit_support_full(xi)
print(f"limit support {lim:.10f}")
for N in (1, 4, 16, 64, 256):
    err = support_normalized(xi, 2 * math.pi * N) - lim
    print(f"N = {N:4d}   error = {err:+.3e}   N * error = {N * err:+.6f}")

drift_free = DualVector([0.0, 1.0, -0.3], xi.psi)
lim0 = limit_support_full(drift_free)
print("drift-free errors:",
      [f"{support_normalized(drift_free, 2 * math.pi * N) - lim0:+.1e}" for N in (1, 2, 3)])

red = xi.reduced()
f = extremal_state(red)
print(f"extremal pairing {pairing(f, red):.12f} vs rho * H "
      f"{field_rho(f.g, 'stop-moving') * limit_support_reduced(red):.12f}")
print("sign profile breakpoints:", np.round(f.g.breakpoints, 4))
