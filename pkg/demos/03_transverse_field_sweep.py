"""Spin-pair correlations across the transverse-field phase diagram.

An 8-site cyclic XY chain with anisotropy 0.5 is scanned over the
transverse field.  The run reproduces the canonical picture: the ground
state crosses parity sectors N/2 times, the last crossing sits exactly at
the factorizing field where discord and deficit become separation
independent, the discord's optimal measurement stays pinned along x while
the deficits' optimal direction flips from x to z, smoothly for the von
Neumann deficit and sharply for the quadratic one.  A CSV with every
measure and angle is written next to this script.
"""

import os

import numpy as np

from qcorr import (
    SpinChainSpec,
    factorizing_field,
    parity_crossings,
    parse_config,
    report_limits,
    run_sweep,
)

N, CHI = 8, 0.5
fac = factorizing_field(CHI, 1.0)
print(f"chain: N = {N}, chi = {CHI}, cant angle theta = {np.degrees(fac.theta):.1f} deg")
print(f"transverse factorizing field h_zs = {fac.h_zs:.6f}")

spec = SpinChainSpec(n_sites=N, j_x=1.0, chi=CHI)
crossings = parity_crossings(spec, 1e-4, 0.5 * (1 + CHI), points=800)
print(f"\nparity crossings ({len(crossings)} = N/2):", np.round(crossings, 6))
print(f"last crossing - h_zs = {crossings[-1] - fac.h_zs:+.2e}")

out = os.path.join(os.path.dirname(__file__), "transverse_sweep.csv")
cfg = parse_config({
    "chain": {"n_sites": N, "j_x": 1.0, "chi": CHI},
    "sweep": {"variable": "h_z", "from": 0.0, "to": 1.25, "points": 101},
    "separations": [1, 2],
    "measures": ["D", "I1", "I2", "concurrence", "eof"],
    "output": out,
})
rows = run_sweep(cfg)
print(f"\nwrote {len(rows)} rows to {out}")

print("\n h_z      D(L=1)   I1(L=1)  I2(L=1)  C(L=1)   theta_D  theta_I1 theta_I2")
for row in rows[::10]:
    c = row.cells
    print(f"{row.variable_value:6.3f} {c[(1, 'D')].value:9.5f} {c[(1, 'I1')].value:9.5f} "
          f"{c[(1, 'I2')].value:8.5f} {c[(1, 'concurrence')].value:8.5f} "
          f"{c[(1, 'D')].theta:9.4f} {c[(1, 'I1')].theta:8.4f} {c[(1, 'I2')].theta:8.4f}")

jump = None
prev = rows[0].cells[(1, "I2")].theta
for row in rows[1:]:
    cur = row.cells[(1, "I2")].theta
    if abs(cur - prev) > 1.0:
        jump = row.variable_value
        break
    prev = cur
print(f"\nsharp x->z flip of the quadratic-deficit direction near h_z ~ {jump}")

limits = report_limits(CHI, N)
print("\nreference values at the factorizing point (separation independent):")
print(f"  overlap-neglected pair: D = {limits['rho_theta']['D']['value']:.6f}, "
      f"I1 = {limits['rho_theta']['I1']['value']:.6f}, "
      f"I2 = {limits['rho_theta']['I2']['value']:.6f}")
print(f"  side-limit concurrences: C+ = {limits['side_plus']['concurrence']:.7f}, "
      f"C- = {limits['side_minus']['concurrence']:.7f}")
print("  (discord and deficit stay finite at factorization; the concurrence")
print("   side limits are small and vanish with the chain-overlap power.)")
