"""Closed-form quadratic optima versus brute-force measurement search.

For the quadratic entropy both optimization problems have exact solutions:
the minimum conditional entropy comes from the generalized eigenproblem of
the correlation tensor against the marginal metric, and the minimum
information loss from the dominant eigenvector of the second-moment matrix.
This script draws random qudit-qubit states and checks both closed forms
against an exhaustive direction grid with local refinement, then shows how
the same machinery approximates the (grid-refined) von Neumann quantities.
"""

import numpy as np

from qcorr import (
    BipartiteLayout,
    QUADRATIC,
    VON_NEUMANN,
    conditional_entropy_min,
    deficit,
    discord,
    make_density,
    quadratic_closed_form,
    quadratic_deficit_closed,
)

rng = np.random.default_rng(2024)


def random_state(dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    mat = g @ g.conj().T
    return make_density(mat / mat.trace())


print("=== closed forms vs grid search ===")
for d_a in (2, 3):
    layout = BipartiteLayout(d_a, 2)
    print(f"\nqudit dimension d_A = {d_a}")
    print(f"{'S2 closed':>12} {'S2 grid':>12} {'gap':>9}   "
          f"{'I2 closed':>12} {'I2 grid':>12} {'gap':>9}")
    for _ in range(5):
        rho = random_state(2 * d_a)
        cf = quadratic_closed_form(rho, layout)
        grid = conditional_entropy_min(rho, layout, QUADRATIC)
        df_cf = quadratic_deficit_closed(rho, layout)
        df_grid = deficit(rho, layout, QUADRATIC)
        print(f"{cf.value:12.8f} {grid.value:12.8f} {abs(cf.value - grid.value):9.1e}   "
              f"{df_cf.value:12.8f} {df_grid.value:12.8f} "
              f"{abs(df_cf.value - df_grid.value):9.1e}")

print("\n=== quadratic direction as a predictor of the von Neumann one ===")
layout = BipartiteLayout(2, 2)
print(f"{'D':>10} {'I1':>10} {'angle(D, S2cond)':>18} {'angle(I1, I2)':>15}")
for _ in range(8):
    rho = random_state(4)
    d = discord(rho, layout)
    s2 = quadratic_closed_form(rho, layout)
    i1 = deficit(rho, layout, VON_NEUMANN)
    i2 = quadratic_deficit_closed(rho, layout)
    ang_d = np.arccos(min(1.0, abs(float(d.k_star.k @ s2.k_star.k))))
    ang_i = np.arccos(min(1.0, abs(float(i1.k_star.k @ i2.k_star.k))))
    print(f"{d.value:10.6f} {i1.value:10.6f} {ang_d:18.4f} {ang_i:15.4f}")
print("\nThe quadratic directions typically sit within a few hundredths of a")
print("radian of the von Neumann ones, at a tiny fraction of the cost.")
