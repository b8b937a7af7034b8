"""Half-integer frequencies, the truncated secular equation and its kernel.

At cut-off N the singular frequencies solve a secular equation whose roots
sit just above k + 1/2 and close in on it like 1/N.  Half-integer controls
change sign after one period and so repeat after two.
"""

import math

import numpy as np

from stringdamp import SpectralSet, eisenstein_kernel, secular_roots, singular_field_check

for N in (1, 2, 10, 40, 160):
    mu = secular_roots(N)[:3]
    print(f"N = {N:4d}  roots {np.round(mu, 6)}  gaps {np.round(mu - np.arange(len(mu)) - 0.5, 6)}")

S = SpectralSet([0.5, 1.5, 3.5], [0.4, 0.2j, -0.1 + 0.1j])
t = np.linspace(0, 4 * math.pi, 400)
rep = singular_field_check(S, t)
print(f"antiperiodic residual {rep.antiperiodic_residual:.1e}, max |u| {rep.max_abs_u:.3f}, "
      f"admissible {rep.admissible}")

for x in (0.0, math.pi / 2, math.pi):
    k = eisenstein_kernel(0.5, x)
    print(f"x = {x:.4f}: series {k.lhs:+.8f}, stated closed form {k.rhs_stated:+.8f}")
