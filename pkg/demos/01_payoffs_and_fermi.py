"""A tour of the two scalar rules everything else is built on.

The dilemma scalars (dg, dr) stretch the prisoner's dilemma between its
mildest corner (0, 0) and its harshest (1, 1); the Fermi rule turns a
payoff gap into an adoption probability whose sharpness is set by the
noise K.
"""

import numpy as np

from sarsapd import DilemmaParams, fermi_probability, payoff_matrix

print("payoff matrices across the dilemma square")
print(f"{'dg':>5} {'dr':>5} | {'R':>5} {'S':>6} {'T':>5} {'P':>4}")
for dg, dr in [(0.0, 0.0), (0.02, 0.0), (0.1, 0.1), (0.5, 0.5), (1.0, 1.0)]:
    m = payoff_matrix(DilemmaParams(dg, dr))
    print(f"{dg:5.2f} {dr:5.2f} | {m.r:5.2f} {m.s:6.2f} {m.t:5.2f} {m.p:4.1f}")

print()
print("Fermi adoption probability vs payoff gap (pi_x - pi_y)")
gaps = np.array([-2.0, -0.5, -0.1, 0.0, 0.1, 0.5, 2.0])
for k in (0.02, 0.1, 0.5):
    w = fermi_probability(gaps, 0.0, k)
    row = " ".join(f"{v:8.4f}" for v in w)
    print(f"  K={k:<4} {row}")
print("  gap:   " + " ".join(f"{g:8.1f}" for g in gaps))
print()
print("Small K is near-deterministic imitation of the richer party;")
print("large K washes the comparison out toward a coin flip.")
