"""Tilted fields: exactly separable ground states and measurement flips.

Tilting the field away from the z axis (angle gamma, in the xz plane)
breaks parity symmetry.  At a chi-dependent magnitude the chain still
factorizes, but now into a unique product ground state, so discord and
entanglement both vanish exactly there.  As gamma grows the discord's
optimal measurement leaves the xz plane and settles on the y axis, a flip
the quadratic closed form anticipates within a couple of degrees.
"""

import numpy as np

from qcorr import (
    BipartiteLayout,
    SpinChainSpec,
    VON_NEUMANN,
    deficit,
    discord,
    entanglement_of_formation,
    factorizing_field,
    ground_state,
    quadratic_closed_form,
    reduced_pair,
)

layout = BipartiteLayout(2, 2)
N, CHI, H_MAG = 8, 0.5, 1.0

fac = factorizing_field(CHI, 1.0, np.deg2rad(15.0))
print(f"cant angle theta = {np.degrees(fac.theta):.1f} deg; at gamma = 15 deg the")
print(f"factorizing magnitude is |h_s| = {fac.h_s:.12f} (exactly J_x here)")


def pair_at(gamma_deg):
    g = np.deg2rad(gamma_deg)
    spec = SpinChainSpec(n_sites=N, j_x=1.0, chi=CHI,
                         field=(H_MAG * np.sin(g), 0.0, H_MAG * np.cos(g)))
    return reduced_pair(ground_state(spec), 0, 1)


print("\ngamma    D(L=1)     Ef(L=1)    I1(L=1)    |k_y| of D   |k_y| of S2cond")
for gamma in (0, 5, 10, 14, 15, 16, 20, 30, 32, 34, 36, 45, 60, 75, 90):
    pair = pair_at(gamma)
    d = discord(pair, layout)
    i1 = deficit(pair, layout, VON_NEUMANN)
    eof = entanglement_of_formation(pair).eof
    s2 = quadratic_closed_form(pair, layout)
    print(f"{gamma:5d} {d.value:10.6f} {eof:10.6f} {i1.value:10.6f} "
          f"{abs(d.k_star.k[1]):12.6f} {abs(s2.k_star.k[1]):14.6f}")

print("""
Highlights:
  * every correlation vanishes at gamma = 15 deg (non-degenerate product
    ground state, unlike the doubly degenerate transverse case),
  * the optimal measurement flips from the xz plane to the y axis around
    gamma ~ 32-34 deg; the quadratic predictor flips ~1.7 deg early, the
    only window where the two directions disagree.
""")
