#!/usr/bin/env python3
"""Three independent evaluations of the same control loop.

The exact density-matrix propagation, a shot-by-shot Monte-Carlo
simulation, and a brute-force scan over the (strength, correction) plane
must all land on the closed-form optimum.  Agreement across routes is
what pins the sign and pairing conventions in the stack.
"""

import time

import numpy as np

import weakctrl as w

theta, p = w.OPERATING_POINT
params = w.scheme_params(theta, p, "optimal")

exact = w.run_protocol_exact(params)
print(f"exact evaluation:      F = {exact.fidelity_avg:.6f}")
print(f"closed form:           F = {w.avg_fidelity_opt(theta, p):.6f}")

rng = np.random.default_rng(42)
for shots in (1_000, 10_000, 100_000):
    mc = w.run_protocol_mc(params, shots, rng)
    pull = (mc.fidelity_avg - exact.fidelity_avg) / mc.stderr_avg
    print(f"monte carlo {shots:>7d}:   F = {mc.fidelity_avg:.6f} "
          f"+- {mc.stderr_avg:.6f}  ({pull:+.2f} sigma)")

start = time.perf_counter()
brute = w.brute_force_protocol_opt(theta, p, resolution=1e-3)
elapsed = time.perf_counter() - start
print(f"\nbrute-force scan ({elapsed:.2f}s):")
print(f"  chi* = {brute.chi:.5f}   (closed form {w.chi_opt(theta, p):.5f})")
print(f"  eta* = {brute.eta:.5f}   (closed form {w.eta_opt(theta, p, w.chi_opt(theta, p)):.5f})")
print(f"  F*   = {brute.fidelity:.7f} (closed form {w.avg_fidelity_opt(theta, p):.7f})")

print("\nper-branch bookkeeping of the exact run:")
for (sign, outcome), prob in sorted(exact.outcome_probabilities.items(), reverse=True):
    print(f"  input {sign:+d}, outcome {outcome:+d}: probability {prob:.4f}")
