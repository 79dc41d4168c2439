#!/usr/bin/env python3
"""Tour of the control landscape: schemes, optima, and the improvement map.

Two non-orthogonal qubit states pass through a phase-flip channel; a
tunable-strength measurement plus a conditional rotation tries to undo
the damage.  This script walks the closed forms: the two limiting
schemes, the optimal strength in between, and the (theta, p) map of how
much the tunable measurement buys.
"""

import math

import numpy as np

import weakctrl as w

theta, p = w.OPERATING_POINT
print(f"operating point: theta={theta}, p={p}")
print(f"input overlap cos(theta) = {math.cos(theta):.4f}\n")

print("scheme comparison at the operating point:")
for scheme in ("dn", "helstrom", "optimal"):
    params = w.scheme_params(theta, p, scheme)
    result = w.run_protocol_exact(params)
    print(f"  {scheme:9s} cos(chi)={math.cos(params.chi):5.3f} eta={params.eta:6.4f}"
          f"  ->  F = {result.fidelity_avg:.4f}")

print("\nthe optimal strength is strictly intermediate:")
chi_star = w.chi_opt(theta, p)
print(f"  cos(chi_opt) = {math.cos(chi_star):.4f}  (0 = no measurement, 1 = projective)")

print("\nwhere does the tunable measurement help the most?")
grid = w.GridSpec(0.0, math.pi / 2, 0.0, 0.5, 200, 200)
best = w.find_max_improvement(grid, refine_tolerance=1e-4)
print(f"  largest gain over both limiting schemes: {best.f_diff:.4f}"
      f" at theta={best.theta:.4f}, p={best.p:.4f}")

print("\nthe do-nothing/Helstrom tie line (projective measurement is *worse*")
print("than doing nothing below it):")
for th in np.linspace(0.3, 1.3, 6):
    p_star = w.crossover_p_closed_form(th)
    print(f"  theta={th:4.2f}: tie at p = {p_star:.4f}")

print("\nnote the tie at the operating angle sits at the improvement maximum:")
print(f"  p*(theta={best.theta:.4f}) = {w.crossover_p_closed_form(best.theta):.4f}")
