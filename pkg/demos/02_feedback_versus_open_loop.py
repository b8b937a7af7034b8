"""Far from rest the feedback removes 2*pi of rho per period, and nothing does better.

A random field of sup norm 5 is driven by the dry-friction feedback and by a
batch of random admissible open-loop controls.  Near rest (sup norm below
1/2) the feedback only flips the sign of the field once per period.
"""

import math

import numpy as np

from stringdamp import apply_control, decay_report, field_rho, random_control, random_field

rng = np.random.default_rng(2)
T = 8 * math.pi
G = random_field(rng, sup=5.0)

rep = decay_report(G, T)
for t, r in rep.trace:
    print(f"t = {t:6.3f}   rho = {r:8.4f}")
print(f"feedback rate {rep.rate:.12f}")

rates = []
for _ in range(200):
    u = random_control(rng, T, n_pieces=int(rng.integers(2, 60)))
    rates.append((field_rho(G, "stop-moving") - field_rho(apply_control(G, u, T), "stop-moving")) / T)
print(f"best of 200 open-loop controls: {max(rates):.4f}")

small = random_field(rng, sup=0.4)
near = decay_report(small, T)
print("near rest, rho at multiples of 2*pi:", [round(r, 6) for _, r in near.trace])
